import os
from pathlib import Path

import pytest

from ..common import extract_python_code_blocks, run_script_successfully

DOCS_PATH = Path(os.path.dirname(__file__)).parent.parent / "docs"


@pytest.mark.parametrize(
    "rst_name",
    [
        pytest.param("user_manual/dataset", marks=(pytest.mark.cpu, pytest.mark.slow)),
        pytest.param("user_manual/training", marks=(pytest.mark.cpu, pytest.mark.slow)),
        pytest.param("user_manual/evaluation", marks=(pytest.mark.cpu, pytest.mark.slow)),
        pytest.param("contributions/adding_learner", marks=pytest.mark.cpu),
    ],
)
def test_codeblocks(rst_name: str, tmp_path: Path) -> None:
    """Test that the code of every documentation section runs without errors."""
    output_dir = tmp_path / "code_blocks"
    extract_python_code_blocks(str(DOCS_PATH / f"{rst_name}.rst"), str(output_dir))

    scripts = sorted(os.listdir(output_dir))
    assert scripts
    for file in scripts:
        run_script_successfully(str(output_dir / file), cwd=str(tmp_path))
