"""Verification suites, the body catalog and suite reports."""

from .catalog import BodyCatalog
from .report import CaseRecord, SuiteReport
from .suites import SUITES, run_suite

__all__ = ["BodyCatalog", "CaseRecord", "SuiteReport", "SUITES", "run_suite"]
