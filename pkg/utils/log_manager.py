import os
import sys
import json
import threading
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union
from enum import Enum
from dataclasses import dataclass, field
from collections import defaultdict

import toml
from loguru import logger


PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_FILE = PROJECT_ROOT / "logging_config.toml"
DEFAULT_FORMAT = (
    "<green>{time:HH:mm:ss}</green> <light-white>|</light-white> <level>{level: <7}</level> "
    "<light-white>|</light-white> <yellow>{extra[name]}</yellow> <light-white>|</light-white> "
    "<cyan>{function}:{line}</cyan> <light-white>-</light-white> {message}"
)


class LogLevel(Enum):
    """日志级别枚举"""
    TRACE = "TRACE"
    DEBUG = "DEBUG"
    INFO = "INFO"
    SUCCESS = "SUCCESS"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


@dataclass
class LogConfig:
    """单个模块的日志配置"""
    module_name: str
    level: LogLevel = LogLevel.WARNING
    file_enabled: bool = False
    console_enabled: bool = True
    file_path: Optional[str] = None
    retention: str = "7 days"
    rotation: str = "10 MB"
    format: str = DEFAULT_FORMAT
    filter_keywords: List[str] = field(default_factory=list)
    exclude_keywords: List[str] = field(default_factory=list)
    enable_compression: bool = True
    enable_json_format: bool = False


@dataclass
class LogStats:
    """模块日志计数"""
    module_name: str
    total_logs: int = 0
    warning_count: int = 0
    error_count: int = 0
    last_message: str = ""


class LogFilter:
    """按关键词过滤日志"""

    def __init__(self, config: LogConfig):
        self.include_keywords = [k.lower() for k in config.filter_keywords]
        self.exclude_keywords = [k.lower() for k in config.exclude_keywords]

    def should_log(self, record) -> bool:
        message = record["message"].lower()
        if any(k in message for k in self.exclude_keywords):
            return False
        if self.include_keywords:
            return any(k in message for k in self.include_keywords)
        return True


class LogMonitor:
    """统计各模块日志数量，CLI诊断和测试会读取"""

    def __init__(self):
        self.stats: Dict[str, LogStats] = {}
        self.lock = threading.Lock()

    def on_log(self, message):
        record = message.record
        module_name = record["extra"].get("name", "default")
        level = record["level"].name
        with self.lock:
            stats = self.stats.setdefault(module_name, LogStats(module_name=module_name))
            stats.total_logs += 1
            stats.last_message = record["message"]
            if level == "WARNING":
                stats.warning_count += 1
            elif level in ("ERROR", "CRITICAL"):
                stats.error_count += 1

    def get_stats(self, module_name: Optional[str] = None) -> Union[Optional[LogStats], Dict[str, LogStats]]:
        with self.lock:
            if module_name:
                return self.stats.get(module_name)
            return dict(self.stats)

    def reset(self):
        with self.lock:
            self.stats.clear()


class LogManager:
    """统一日志管理器（单例）"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if hasattr(self, '_initialized'):
            return

        self._initialized = True
        self.configs: Dict[str, LogConfig] = {}
        self.filters: Dict[str, LogFilter] = {}
        self.monitor = LogMonitor()
        self.log_dir = PROJECT_ROOT / "logs"
        self.handler_ids: Dict[str, List[int]] = defaultdict(list)

        # 移除loguru默认处理器，stdout留给JSON/SVG输出
        logger.remove()
        self.load_config_from_file(str(DEFAULT_CONFIG_FILE))

    def register_module(self, module_name: str, config: LogConfig):
        """注册模块日志配置"""
        self.configs[module_name] = config
        self.filters[module_name] = LogFilter(config)
        self._setup_handlers(module_name, config)

    def _setup_handlers(self, module_name: str, config: LogConfig):
        for handler_id in self.handler_ids.pop(module_name, []):
            try:
                logger.remove(handler_id)
            except ValueError:
                pass

        def log_filter(record):
            if record["extra"].get("name") != module_name:
                return False
            return self.filters[module_name].should_log(record)

        if config.console_enabled:
            if os.name == 'nt':
                import colorama
                colorama.init()
            handler_id = logger.add(
                sys.stderr,
                format=config.format,
                level=config.level.value,
                filter=log_filter,
                colorize=True,
                backtrace=False,
                diagnose=False,
            )
            self.handler_ids[module_name].append(handler_id)

        if config.file_enabled:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            log_file = config.file_path or str(self.log_dir / f"{module_name}_{datetime.now().strftime('%Y%m%d')}.log")
            handler_id = logger.add(
                log_file,
                format=config.format,
                level=config.level.value,
                filter=log_filter,
                rotation=config.rotation,
                retention=config.retention,
                compression="gz" if config.enable_compression else None,
                serialize=config.enable_json_format,
                enqueue=True,
                catch=True,
            )
            self.handler_ids[module_name].append(handler_id)

        # 监控处理器统计所有级别
        handler_id = logger.add(self.monitor.on_log, level="TRACE", filter=log_filter, format="{message}")
        self.handler_ids[module_name].append(handler_id)

    def get_logger(self, module_name: str):
        """获取指定模块的日志器"""
        if module_name not in self.configs:
            base = self.configs.get("default")
            config = LogConfig(module_name=module_name)
            if base is not None:
                config = LogConfig(**{**base.__dict__, "module_name": module_name})
            self.register_module(module_name, config)
        return logger.bind(name=module_name)

    def update_config(self, module_name: str, **kwargs):
        if module_name not in self.configs:
            return
        config = self.configs[module_name]
        for key, value in kwargs.items():
            if hasattr(config, key):
                setattr(config, key, value)
        self.filters[module_name] = LogFilter(config)
        self._setup_handlers(module_name, config)

    def set_level(self, module_name: str, level: Union[str, LogLevel]):
        """设置模块日志级别"""
        if isinstance(level, str):
            level = LogLevel(level.upper())
        self.update_config(module_name, level=level)

    def set_level_all(self, level: Union[str, LogLevel]):
        for module_name in list(self.configs):
            self.set_level(module_name, level)

    def get_stats(self, module_name: Optional[str] = None):
        return self.monitor.get_stats(module_name)

    def load_config_from_file(self, config_file: str):
        """从toml/json文件加载 [logging] 配置"""
        path = Path(config_file)
        if not path.exists():
            return
        try:
            with open(path, 'r', encoding='utf-8') as f:
                if path.suffix == '.toml':
                    config_data = toml.load(f)
                elif path.suffix == '.json':
                    config_data = json.load(f)
                else:
                    raise ValueError(f"不支持的配置文件格式: {path.suffix}")
        except (OSError, ValueError, toml.TomlDecodeError) as e:
            sys.stderr.write(f"加载日志配置失败: {e}\n")
            return

        logging_config = config_data.get('logging', {})
        global_config = logging_config.get('global', {})
        if 'log_dir' in global_config:
            self.log_dir = PROJECT_ROOT / global_config['log_dir']

        for module_name, module_config in logging_config.get('modules', {}).items():
            config = LogConfig(
                module_name=module_name,
                level=LogLevel(module_config.get('level', 'WARNING').upper()),
                file_enabled=module_config.get('file_enabled', False),
                console_enabled=module_config.get('console_enabled', True),
                file_path=module_config.get('file_path'),
                retention=module_config.get('retention', '7 days'),
                rotation=module_config.get('rotation', '10 MB'),
                format=module_config.get('format', DEFAULT_FORMAT),
                filter_keywords=module_config.get('filter_keywords', []),
                exclude_keywords=module_config.get('exclude_keywords', []),
                enable_compression=module_config.get('enable_compression', True),
                enable_json_format=module_config.get('enable_json_format', False),
            )
            self.register_module(module_name, config)


# 全局日志管理器实例
log_manager = LogManager()


def get_logger(module_name: str):
    """获取模块日志器的便捷函数"""
    return log_manager.get_logger(module_name)
