import json
import logging
from pathlib import Path

from engine import config
from engine.errors import FixtureError

logger = logging.getLogger(__name__)

FIXTURE_SCHEMA = 1


def load_json(path: str | Path) -> dict:
    """Load a JSON file and return it as a dict."""
    with open(path, "r") as f:
        return json.load(f)


def load_verdicts(path: str | Path | None = None) -> dict:
    """Published classification rows keyed by "d,g,r"."""
    data = load_json(path or config.VERDICTS_PATH)
    return data.get("rows", {})


def load_fixtures(directory: str | Path | None = None) -> dict[str, dict]:
    """Every fixture group in a directory, keyed by file stem and sorted by name.

    Each file holds {"schema": 1, "anchor": str, "cases": [{"op", "args", "expect", "tag"}]}.
    """
    directory = Path(directory or config.FIXTURES_DIR)
    if not directory.is_dir():
        raise FixtureError(f"fixture directory not found: {directory}")

    groups = {}
    for path in sorted(directory.glob("*.json")):
        group = load_json(path)
        if group.get("schema") != FIXTURE_SCHEMA:
            raise FixtureError(f"{path.name}: unsupported fixture schema {group.get('schema')!r}")
        cases = group.get("cases")
        if not isinstance(cases, list):
            raise FixtureError(f"{path.name}: 'cases' must be a list")
        for i, case in enumerate(cases):
            missing = {"op", "args", "expect"} - set(case)
            if missing:
                raise FixtureError(f"{path.name} case {i}: missing {sorted(missing)}")
        groups[path.stem] = group
    logger.info("loaded %d fixture group(s) from %s", len(groups), directory)
    return groups
