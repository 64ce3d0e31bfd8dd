"""stabwall 的异常层级，`code` 就是类名，报告里原样输出"""


class StabWallError(Exception):
    """所有计算/输入错误的基类"""

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message}


class InputError(StabWallError):
    """用户输入有误，CLI 退出码 2"""


class ComputationError(StabWallError):
    """数学前提不满足，CLI 退出码 1"""


# 输入类
class ParseError(InputError):
    pass


class UnknownPreset(InputError):
    pass


class EmptyInput(InputError):
    pass


class EmptyModel(InputError):
    pass


class EmptyViewport(InputError):
    pass


class InvalidDegree(InputError):
    pass


class WrongShape(InputError):
    pass


# 计算类
class NonIntegralGenus(ComputationError):
    pass


class NonpositiveT(ComputationError):
    pass


class NonpositiveS(ComputationError):
    pass


class RankZero(ComputationError):
    pass


class InvalidRank(ComputationError):
    pass


class NegativeDiscriminant(ComputationError):
    pass


class ProbeOnVerticalWall(ComputationError):
    pass


class HypothesisViolated(ComputationError):
    pass


class ZeroCharge(ComputationError):
    pass


class NotAStabilityFunction(ComputationError):
    pass


class UndefinedBetaBar(ComputationError):
    pass


class DegenerateDelta(ComputationError):
    pass


class MixedRadicand(ComputationError):
    pass
