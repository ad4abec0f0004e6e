import json

import numpy as np
import pytest

from nrvqa.evaluation import REPORT_COLUMNS, EvaluationReport, UnitResult
from nrvqa.evaluation.render import report_csv, report_markdown, split_label
from nrvqa.evaluation.report import format_value


def _report() -> EvaluationReport:
    units = [
        UnitResult("LR", "c0", "overall", 0.9, 10, seed=0),
        UnitResult("LR", "c1", "overall", 0.7, 20, seed=0),
        UnitResult("LR", "c2", "overall", None, 5, seed=0),
        UnitResult("RT", "c0", "overall", 0.5, 10, seed=0),
        UnitResult("RT", "c1", "overall", 0.5, 20, seed=0),
        UnitResult("RT", "c2", "overall", 0.5, 5, seed=0),
    ]
    return EvaluationReport("blind", ["LR", "RT"], units, seed=0)


@pytest.mark.cpu
def test_summary_excludes_undefined_units() -> None:
    """Test mean, population deviation and counts of a block with an undefined unit."""
    row = _report().summary("LR", "overall")
    assert row.mean_pcc == pytest.approx(0.8)
    assert row.std_pcc == pytest.approx(0.1)
    assert row.n == 30
    assert row.units == 3
    assert row.undefined == 1
    assert row.mean_time is None


@pytest.mark.cpu
def test_flagged_units() -> None:
    """Test that undefined units are flagged in the report and its metadata."""
    report = _report()
    assert [(unit.algo, unit.group) for unit in report.flagged()] == [("LR", "c2")]
    metadata = json.loads(report.metadata_json())
    assert metadata["flagged"] == [["LR", "c2"]]
    assert metadata["std"] == "population"


@pytest.mark.cpu
def test_rows_follow_units_then_summaries() -> None:
    """Test the row order and text of the CSV rows."""
    rows = _report().rows()
    assert [row["group"] for row in rows] == ["c0", "c1", "c2", "overall"] * 2
    assert rows[2]["pcc"] == ""
    assert rows[4]["pcc"] == "0.5"
    assert rows[7]["n"] == "35"


@pytest.mark.cpu
def test_csv_header() -> None:
    """Test the fixed CSV header."""
    text = report_csv(_report())
    assert text.splitlines()[0] == ",".join(REPORT_COLUMNS)
    assert len(text.splitlines()) == 9


@pytest.mark.cpu
def test_markdown_table() -> None:
    """Test that the markdown table shows six decimals and the undefined unit."""
    text = report_markdown(_report())
    assert "| c0 | 0.900000 | 0.500000 |" in text
    assert "| c2 | undefined | 0.500000 |" in text
    assert "| Overall | 0.800000 ± 0.100000 | 0.500000 ± 0.000000 |" in text
    assert "Undefined correlations: LR/c2" in text


@pytest.mark.cpu
@pytest.mark.parametrize("block, label", [("0.8", "80/20"), ("0.2", "20/80"), ("0.5", "50/50")])
def test_split_label(block: str, label: str) -> None:
    """Test the train/test labels of fraction blocks."""
    assert split_label(block) == label


@pytest.mark.cpu
def test_format_value() -> None:
    """Test the exact text of report numbers."""
    assert format_value(None) == ""
    assert format_value(np.float64(0.1)) == "0.1"
