from stabwall.threefold_p3 import castelnuovo_excluded
from utils.log_manager import LogLevel, get_logger, log_manager


def test_monitor_counts_warnings():
    get_logger('p3')
    log_manager.monitor.reset()
    verdict = castelnuovo_excluded(8, 0)
    assert not verdict.excluded
    stats = log_manager.get_stats('p3')
    assert stats.warning_count == 1
    assert "Q < 0" in stats.last_message


def test_monitor_ignores_other_modules():
    get_logger('p3')
    log_manager.monitor.reset()
    get_logger('hn').warning("只记在 hn 下")
    assert log_manager.get_stats('p3') is None
    assert log_manager.get_stats('hn').warning_count == 1


def test_set_level():
    get_logger('svg')
    log_manager.set_level('svg', 'debug')
    assert log_manager.configs['svg'].level is LogLevel.DEBUG
    log_manager.set_level('svg', LogLevel.WARNING)
    assert log_manager.configs['svg'].level is LogLevel.WARNING
