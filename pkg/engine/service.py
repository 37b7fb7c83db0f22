import logging
from concurrent.futures import ThreadPoolExecutor

from engine import config
from engine.evaluator import evaluate_group
from engine.hilbert import analyze, table
from engine.loader import load_fixtures, load_verdicts
from engine.report import generate_pdf_report

logger = logging.getLogger(__name__)


class CensusService:
    def __init__(self, verdicts_path: str | None = None, workers: int | None = None):
        self.verdicts = load_verdicts(verdicts_path)
        self.workers = workers or config.WORKERS

    def analyze(self, d: int, g: int, r: int) -> dict:
        return analyze(d, g, r, verdicts=self.verdicts, workers=self.workers).to_dict()

    def table(self, d: int, r: int, g_lo: int, g_hi: int, pdf_path: str | None = None) -> dict:
        """
        Classification rows for every genus in [g_lo, g_hi];
        optionally writes the PDF report as well.
        """
        result = table(d, r, g_lo, g_hi, verdicts=self.verdicts, workers=self.workers).to_dict()
        if pdf_path:
            generate_pdf_report(result, pdf_path)
            logger.info("PDF report written to %s", pdf_path)
        return result

    def selftest(self, fixtures_dir: str | None = None) -> dict:
        """
        Replay every fixture group.
        Groups run concurrently; results come back in file-name order.
        """
        groups = load_fixtures(fixtures_dir)
        names = sorted(groups)
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            reports = list(pool.map(lambda n: evaluate_group(n, groups[n]), names))

        total = sum(r["total"] for r in reports)
        failed = sum(r["failed"] for r in reports)
        published = sum(1 for r in reports for case in r["results"] if case["tag"] == "PAPER")
        return {
            "groups": reports,
            "summary": {"groups": len(reports), "cases": total, "failed": failed, "paper_cases": published},
        }
