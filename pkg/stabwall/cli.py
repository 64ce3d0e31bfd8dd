"""
stabwall 命令行入口。

    python -m stabwall largest-wall --surface p2 --n 4
    python -m stabwall walls --n 4 --beta -1
    python -m stabwall hn --p1-degrees 2,0,-1
    python -m stabwall p3 castelnuovo --d 5 --g 3
    python -m stabwall plot --n 4 --svg-out hilb4.svg

负的有理数要写成 --beta=-1/2 这种形式，否则 argparse 会当成选项。
退出码：0 成功，1 计算错误，2 用法错误。
"""
import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import dotenv
from dotmap import DotMap
from pydantic import ValidationError

from stabwall import errors
from stabwall.api_models import CommandName, CommandRequest, Report
from stabwall.config import get_settings, load_config
from stabwall.core_lattice import (
    ChernSurface,
    SurfaceData,
    delta,
    discriminants,
    format_rational,
    ideal_points,
    parse_rational,
    resolve_surface,
)
from stabwall.hilbert_nef import is_extremal, nef_divisor_hilb, nef_from_largest_wall
from stabwall.hn_polygon import ChargeSpec, SubobjectModel, hn_from_degrees, hn_polygon
from stabwall.svg_render import render_svg
from stabwall.threefold_p3 import ChernP3, beta_bar, castelnuovo_excluded, q_circle, q_form
from stabwall.tilt_plane import Wall, WallKind, compare_tilt_slopes, numerical_wall, tilt_slope, vertical_wall
from stabwall.wall_enum import default_max_rank, enumerate_walls, largest_wall_ideal_sheaf
from utils.log_manager import get_logger, log_manager

logger = get_logger('cli')


def _rational(params: Dict[str, str], key: str, default=None) -> Optional[Fraction]:
    if key not in params:
        return default
    return parse_rational(params[key])


def _integer(params: Dict[str, str], key: str) -> int:
    if key not in params:
        raise errors.EmptyInput(f"缺少参数 --{key.replace('_', '-')}")
    value = parse_rational(params[key])
    if value.denominator != 1:
        raise errors.ParseError(f"--{key} 必须是整数: {params[key]}")
    return int(value)


def _t_from_alpha(params: Dict[str, str]) -> Optional[Fraction]:
    alpha = _rational(params, "alpha")
    return None if alpha is None else alpha * alpha


def _surface_class(params: Dict[str, str]) -> ChernSurface:
    if "chern" in params:
        return ChernSurface.parse(params["chern"])
    if "n" in params:
        return ideal_points(_integer(params, "n"))
    raise errors.EmptyInput("需要 --chern 或 --n")


def _beta_line(v: ChernSurface, S: SurfaceData, params: Dict[str, str]) -> Fraction:
    beta = _rational(params, "beta")
    if beta is not None:
        return beta
    # 默认探针取竖直墙左边一格；秩零的类没有竖直墙
    return vertical_wall(v, S) - 1 if v.r != 0 else Fraction(0)


def _cmd_wall(S: SurfaceData, params: Dict[str, str]) -> dict:
    v = ChernSurface.parse(params["chern"]) if "chern" in params else None
    w = ChernSurface.parse(params["other"]) if "other" in params else None
    if v is None or w is None:
        raise errors.EmptyInput("wall 需要 --chern 和 --other")
    payload = {"v": v.to_json(), "w": w.to_json(), "wall": numerical_wall(v, w, S).to_json()}
    t, beta = _t_from_alpha(params), _rational(params, "beta")
    if t is not None and beta is not None:
        payload["slopes"] = {
            "v": tilt_slope(v, t, beta, S).to_json(),
            "w": tilt_slope(w, t, beta, S).to_json(),
            "order": compare_tilt_slopes(v, w, t, beta, S).value,
        }
        payload["discriminants"] = discriminants(v, S, t, beta).to_json()
    return payload


def _walls(S: SurfaceData, params: Dict[str, str]):
    v = _surface_class(params)
    beta = _beta_line(v, S, params)
    max_rank = _integer(params, "max_rank") if "max_rank" in params else None
    if max_rank is None and delta(v, S) > 0:
        max_rank = default_max_rank(v, S, beta)
    return v, beta, max_rank, enumerate_walls(v, S, beta, max_rank)


def _cmd_walls(S: SurfaceData, params: Dict[str, str]) -> dict:
    v, beta, max_rank, walls = _walls(S, params)
    return {
        "v": v.to_json(),
        "beta": format_rational(beta),
        "max_rank": max_rank,
        "walls": [c.to_json() for c in walls],
    }


def _cmd_largest_wall(S: SurfaceData, params: Dict[str, str]) -> dict:
    n = _integer(params, "n")
    candidate = largest_wall_ideal_sheaf(n, S)
    return {
        "n": n,
        "center": format_rational(candidate.wall.center),
        **candidate.to_json(),
    }


def _load_model(text: str):
    """--model 先按 JSON 解析，不是 JSON 再当文件路径"""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        error = e
    try:
        text = Path(text).read_text(encoding='utf-8')
    except (OSError, ValueError):
        raise errors.ParseError(f"--model 既不是合法的 JSON 也不是可读的文件: {error}") from error
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise errors.ParseError(f"--model 文件不是合法的 JSON: {e}") from e


def _cmd_hn(S: SurfaceData, params: Dict[str, str]) -> dict:
    if "p1_degrees" in params:
        degrees = [_integer({"p1_degrees": x}, "p1_degrees") for x in params["p1_degrees"].split(',')]
        return {"degrees": degrees, "factors": [list(f) for f in hn_from_degrees(degrees)]}
    if "model" not in params:
        raise errors.EmptyInput("hn 需要 --p1-degrees 或 --model")
    data = _load_model(params["model"])
    try:
        model = SubobjectModel(target=data["target"], sub_classes=data.get("sub_classes", []))
        charge = ChargeSpec(real_part=data["charge"]["real_part"], imag_part=data["charge"]["imag_part"])
    except (KeyError, TypeError, AttributeError) as e:
        raise errors.ParseError(f"--model 缺少字段或类型不对: {e}") from e
    return hn_polygon(model, charge).to_json()


def _cmd_nef_hilb(S: SurfaceData, params: Dict[str, str]) -> dict:
    n = _integer(params, "n")
    nef = nef_divisor_hilb(S, n)
    extremal, genus = is_extremal(S, n)
    payload = {"n": n, "divisor": nef.to_json(), "extremal": extremal, "genus": genus}
    # n = a²H² 时 O(-aH) 的墙退化，只报告除子
    if n > S.a * S.a * S.h_squared:
        divisor, candidate = nef_from_largest_wall(n, S)
        payload["wall"] = candidate.to_json()
        payload["divisor_from_wall"] = divisor.to_json()
    return payload


def _cmd_p3_castelnuovo(S: SurfaceData, params: Dict[str, str]) -> dict:
    return castelnuovo_excluded(_integer(params, "d"), _integer(params, "g")).to_json()


def _cmd_p3_q(S: SurfaceData, params: Dict[str, str]) -> dict:
    if "chern" not in params:
        raise errors.EmptyInput("p3 q 需要 --chern ch0,ch1,ch2,ch3")
    v = ChernP3.parse(params["chern"])
    payload = {"v": v.to_json(), "q_circle": q_circle(v).to_json()}
    t, beta = _t_from_alpha(params), _rational(params, "beta")
    if t is not None and beta is not None:
        payload["q"] = format_rational(q_form(v, t, beta))
    try:
        payload["beta_bar"] = beta_bar(v).to_json()
    except errors.UndefinedBetaBar as e:
        payload["beta_bar"] = None
        logger.debug(f"β̄ 无定义: {e}")
    return payload


def _viewport(walls: List[Wall], params: Dict[str, str]):
    """没有给出视口时包住所有墙，再各留一格"""
    lo, hi, top = Fraction(-1), Fraction(1), Fraction(1)
    for wall in walls:
        if wall.is_circle:
            rho = Fraction(math.isqrt(math.ceil(wall.radius_sq)) + 1)
            lo, hi, top = min(lo, wall.center - rho), max(hi, wall.center + rho), max(top, rho)
        elif wall.kind is WallKind.VERTICAL:
            lo, hi = min(lo, wall.beta), max(hi, wall.beta)
    return (
        _rational(params, "beta_min", lo - 1),
        _rational(params, "beta_max", hi + 1),
        _rational(params, "alpha_max", top + 1),
    )


def _cmd_plot(S: SurfaceData, params: Dict[str, str]) -> dict:
    v, beta, max_rank, candidates = _walls(S, params)
    walls = [c.wall for c in candidates]
    if v.r != 0:
        walls.append(Wall.vertical(vertical_wall(v, S)))
    viewport = _viewport(walls, params)
    return {
        "v": v.to_json(),
        "viewport": [format_rational(x) for x in viewport],
        "walls": [w.to_json() for w in walls],
        "svg": render_svg(walls, viewport),
    }


HANDLERS: Dict[CommandName, Callable[[SurfaceData, Dict[str, str]], dict]] = {
    CommandName.WALL: _cmd_wall,
    CommandName.WALLS: _cmd_walls,
    CommandName.LARGEST_WALL: _cmd_largest_wall,
    CommandName.HN: _cmd_hn,
    CommandName.NEF_HILB: _cmd_nef_hilb,
    CommandName.P3_CASTELNUOVO: _cmd_p3_castelnuovo,
    CommandName.P3_Q: _cmd_p3_q,
    CommandName.PLOT: _cmd_plot,
}

# 不用曲面的命令
_SURFACE_FREE = {CommandName.HN, CommandName.P3_CASTELNUOVO, CommandName.P3_Q}


def _error_report(error: errors.StabWallError) -> Report:
    return Report(status="error", payload=error.to_dict(), diagnostics=[str(error)])


def _log_counts() -> Dict[str, Tuple[int, int]]:
    return {name: (s.warning_count, s.error_count) for name, s in log_manager.get_stats().items()}


def _log_diagnostics(before: Dict[str, Tuple[int, int]]) -> List[str]:
    """本次命令期间各模块新增的 warning/error 条数"""
    lines = []
    for name, (warn, err) in sorted(_log_counts().items()):
        w0, e0 = before.get(name, (0, 0))
        if warn > w0 or err > e0:
            lines.append(f"log {name}: {warn - w0} warning, {err - e0} error")
    return lines


def execute(request: CommandRequest) -> Report:
    """分派到对应模块；所有 StabWallError 都变成 status=error 的报告"""
    before = _log_counts()
    try:
        diagnostics = []
        S = None
        if request.command not in _SURFACE_FREE:
            S = resolve_surface(request.surface)
            diagnostics.append(f"surface: {S.describe()}")
        payload = HANDLERS[request.command](S, request.parameters)
    except errors.StabWallError as e:
        logger.error(f"{request.command.value} 失败: {e.code}: {e.message}")
        report = _error_report(e)
    except ValidationError as e:
        error = errors.ParseError(f"输入校验失败: {e.errors()[0]['msg']}")
        logger.error(f"{request.command.value} 失败: {error.message}")
        report = _error_report(error)
    else:
        report = Report(status="ok", payload=payload, diagnostics=diagnostics)
    report.diagnostics.extend(_log_diagnostics(before))
    return report


def exit_code(report: Report) -> int:
    if report.status == "ok":
        return 0
    error_cls = getattr(errors, report.payload.get("error", ""), None)
    if isinstance(error_cls, type) and issubclass(error_cls, errors.InputError):
        return 2
    return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--surface', default='p2', help='曲面预设名或 toml/json 文件路径')
    common.add_argument('--json', action='store_true', help='输出 JSON 报告（plot 以外的命令默认如此）')
    common.add_argument('--svg-out', help='plot 命令把 SVG 写到这个文件')
    common.add_argument('--log-level', type=str.upper,
                        choices=['TRACE', 'DEBUG', 'INFO', 'SUCCESS', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='所有模块的日志级别，如 DEBUG/INFO')

    parser = argparse.ArgumentParser(prog='stabwall', description='tilt 稳定性的墙与 Chern 特征标计算')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('wall', parents=[common], help='两个类之间的数值墙')
    p.add_argument('--chern', required=True, help='r,c,d')
    p.add_argument('--other', required=True, help='r,c,d')
    p.add_argument('--alpha')
    p.add_argument('--beta')

    for name, helptext in (('walls', '列出候选墙'), ('plot', '把墙画成 SVG')):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument('--chern', help='r,c,d')
        p.add_argument('--n', help='理想层 (1,0,-n)')
        p.add_argument('--beta', help='探针 β₀')
        p.add_argument('--max-rank')
        if name == 'plot':
            p.add_argument('--beta-min')
            p.add_argument('--beta-max')
            p.add_argument('--alpha-max')

    p = sub.add_parser('largest-wall', parents=[common], help='(1,0,-n) 的最大墙')
    p.add_argument('--n', required=True)

    p = sub.add_parser('hn', parents=[common], help='Harder-Narasimhan 滤过')
    p.add_argument('--p1-degrees', help='P¹ 上直和项的次数，逗号分隔')
    p.add_argument('--model', help='JSON 字符串或文件：target, sub_classes, charge')

    p = sub.add_parser('nef-hilb', parents=[common], help='Hilbert 概形上的 nef 除子')
    p.add_argument('--n', required=True)

    p3 = sub.add_parser('p3', help='P³ 上的计算')
    p3_sub = p3.add_subparsers(dest='p3_command', required=True)
    p = p3_sub.add_parser('castelnuovo', parents=[common], help='Castelnuovo 亏格界的排除')
    p.add_argument('--d', required=True)
    p.add_argument('--g', required=True)
    p = p3_sub.add_parser('q', parents=[common], help='Q_{α,β} 二次型与它的零点圆')
    p.add_argument('--chern', required=True, help='ch0,ch1,ch2,ch3')
    p.add_argument('--alpha')
    p.add_argument('--beta')
    return parser


_PARAMETER_KEYS = ("chern", "other", "alpha", "beta", "n", "d", "g", "max_rank",
                   "p1_degrees", "model", "beta_min", "beta_max", "alpha_max")


def request_from_args(args: argparse.Namespace) -> CommandRequest:
    command = args.command
    if command == 'p3':
        command = f"p3-{args.p3_command}"
    parameters = {key: str(getattr(args, key)) for key in _PARAMETER_KEYS if getattr(args, key, None) is not None}
    return CommandRequest(command=command, surface=args.surface, parameters=parameters)


def _emit(report: Report, args: argparse.Namespace):
    if report.status == "ok" and args.command == 'plot':
        svg = report.payload["svg"]
        if args.svg_out:
            Path(args.svg_out).write_text(svg, encoding='utf-8')
            logger.info(f"SVG 写入 {args.svg_out}")
        if not args.json:
            if not args.svg_out:
                sys.stdout.write(svg)
            return
    sys.stdout.write(json.dumps(report.model_dump(mode='json'), ensure_ascii=False, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    dotenv.load_dotenv()
    settings = get_settings()
    level = settings.log_level or load_config().get("general", DotMap()).get("log_level")
    if level:
        log_manager.set_level_all(level)

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 已经把用法打到 stderr
        return 0 if e.code in (0, None) else 2
    if args.log_level:
        log_manager.set_level_all(args.log_level)

    try:
        request = request_from_args(args)
    except errors.StabWallError as e:
        report = _error_report(e)
    except ValidationError as e:
        report = _error_report(errors.ParseError(f"请求校验失败: {e.errors()[0]['msg']}"))
    else:
        report = execute(request)
    _emit(report, args)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
