from enum import Enum
from typing import Any, Dict, List, Literal

from pydantic import BaseModel, Field, field_validator

from stabwall.core_lattice import parse_rational

# 这些参数必须是精确有理数
RATIONAL_PARAMETERS = ("alpha", "beta", "n", "d", "g", "s", "max_rank", "beta_min", "beta_max", "alpha_max")
# 逗号分隔的有理数列表
VECTOR_PARAMETERS = ("chern", "other", "p1_degrees")


class CommandName(str, Enum):
    WALL = "wall"
    WALLS = "walls"
    LARGEST_WALL = "largest-wall"
    HN = "hn"
    NEF_HILB = "nef-hilb"
    P3_CASTELNUOVO = "p3-castelnuovo"
    P3_Q = "p3-q"
    PLOT = "plot"


class CommandRequest(BaseModel):
    command: CommandName
    surface: str = "p2"
    parameters: Dict[str, str] = Field(default_factory=dict)

    @field_validator('parameters')
    @classmethod
    def _exact_rationals(cls, value: Dict[str, str]) -> Dict[str, str]:
        # 计算之前就拒绝写错的有理数，ParseError 原样抛出
        for key in RATIONAL_PARAMETERS:
            if key in value:
                parse_rational(value[key])
        for key in VECTOR_PARAMETERS:
            if key in value:
                for part in value[key].split(','):
                    parse_rational(part)
        return value


class Report(BaseModel):
    status: Literal["ok", "error"] = "ok"
    payload: Dict[str, Any] = Field(default_factory=dict)
    diagnostics: List[str] = Field(default_factory=list)
