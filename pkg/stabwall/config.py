import json
from functools import lru_cache
from pathlib import Path
from typing import Optional

import toml
from dotmap import DotMap
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """环境变量覆盖项，前缀 STABWALL_"""
    model_config = SettingsConfigDict(env_prefix="STABWALL_", extra="ignore")

    config: Path = Field(PROJECT_ROOT / "config.toml", description="主配置文件路径")
    max_denom: Optional[int] = Field(None, ge=0, description="覆盖 wall_enum.max_denom")
    log_level: Optional[str] = Field(None, description="覆盖所有模块的日志级别")


def get_settings() -> Settings:
    # 不缓存：测试里会用 monkeypatch 改环境变量
    return Settings()


@lru_cache(maxsize=8)
def _load_file(path: str) -> dict:
    with open(path, 'r', encoding='utf-8') as f:
        if path.endswith('.json'):
            return json.load(f)
        return toml.load(f)


def load_config(path: Optional[Path] = None) -> DotMap:
    """读取 config.toml，返回 DotMap；文件不存在时返回空 DotMap"""
    path = Path(path or get_settings().config)
    if not path.exists():
        return DotMap(_dynamic=False)
    return DotMap(_load_file(str(path)), _dynamic=False)


def load_table(path: Path) -> dict:
    """读取单个 toml/json 文件为 dict（曲面文件等）"""
    return _load_file(str(Path(path)))


def wall_enum_max_denom() -> int:
    """ch2 分母设置：环境变量优先，其次 config.toml，默认 0（层的格点）"""
    settings = get_settings()
    if settings.max_denom is not None:
        return settings.max_denom
    value = load_config().get("wall_enum", DotMap()).get("max_denom", 0)
    return int(value or 0)


def wall_enum_verify_largest() -> bool:
    value = load_config().get("wall_enum", DotMap()).get("verify_largest_wall", True)
    return bool(value)


def svg_options() -> DotMap:
    defaults = {
        "width": 640,
        "height": 400,
        "precision": 12,
        "axis_color": "#444444",
        "wall_color": "#1f77b4",
        "vertical_color": "#d62728",
        "band_color": "#cccccc",
    }
    table = load_config().get("svg", DotMap()).toDict() if "svg" in load_config() else {}
    return DotMap({**defaults, **table}, _dynamic=False)
