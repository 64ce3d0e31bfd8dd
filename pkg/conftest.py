import sys
from pathlib import Path

# 让 tests/ 能直接 import stabwall 和 utils
sys.path.insert(0, str(Path(__file__).resolve().parent))
