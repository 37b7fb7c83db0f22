import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Configuration
PACKAGE_DIR = Path(__file__).resolve().parent
FIXTURES_DIR = os.getenv("CENSUS_FIXTURES", "fixtures")
VERDICTS_PATH = os.getenv("CENSUS_VERDICTS", str(PACKAGE_DIR / "verdicts.json"))
WORKERS = int(os.getenv("CENSUS_WORKERS", "4"))
LOG_LEVEL = os.getenv("CENSUS_LOG_LEVEL", "WARNING").upper()

# Check for debug mode via environment variable
DEBUG_MODE = os.getenv("CENSUS_DEBUG", "false").lower() == "true"
