"""Unit tests for JSONReporter class.

Tests JSON report generation, serialization, validation, and error handling.
"""

import io
import json
import math
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.reports.json_reporter import JSONReporter
from src.reports.report_models import ResultReport, ResultTable


@pytest.fixture
def temp_dir():
    """Create temporary directory for test outputs."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def report():
    """Critical-coupling report with a nested payload."""
    table = ResultTable.build("critical", ["N", "gamma_c", "gap"],
                              [[20, 0.552, 1e-9], [40, np.float64(0.531), math.nan]])
    return ResultReport("critical", (("omega_a", 1.0), ("surface", "sacs_even")), (table,),
                        payload={"brackets": {"20": (0.55, 0.5501)}})


class TestJSONReporterRender:
    """Test JSONReporter.render()."""

    def test_structure(self, report):
        """Test command, metadata, tables as row objects and the payload."""
        data = json.loads(JSONReporter().render(report))

        assert data["command"] == "critical"
        assert data["metadata"] == {"omega_a": 1.0, "surface": "sacs_even"}
        assert data["critical"][0] == {"N": 20, "gamma_c": 0.552, "gap": 1e-9}
        assert data["brackets"] == {"20": [0.55, 0.5501]}

    def test_non_finite_as_strings(self, report):
        """Test NaN is written as a string and the output is strict JSON."""
        text = JSONReporter().render(report)
        data = json.loads(text)

        assert data["critical"][1]["gap"] == "nan"
        assert "NaN" not in text

    def test_numpy_values(self, report):
        """Test numpy scalars and arrays serialise as plain numbers."""
        arrays = ResultReport("surface", (), (), payload={"energies": np.array([[1.0, -0.5]])})
        data = json.loads(JSONReporter().render(arrays))

        assert data["energies"] == [[1.0, -0.5]]
        assert json.loads(JSONReporter().render(report))["critical"][1]["gamma_c"] == 0.531

    def test_sorted_and_deterministic(self, report):
        """Test keys are sorted so identical runs give identical bytes."""
        text = JSONReporter().render(report)

        assert text == JSONReporter().render(report)
        assert text.index('"brackets"') < text.index('"command"') < text.index('"metadata"')
        assert text.endswith("}\n")

    def test_seventeen_digit_floats(self):
        """Test floats are written with 17 significant digits and load back exactly."""
        data = ResultReport("surface", (("gamma", 0.1), ("omega_a", 1.0)), ())
        text = JSONReporter().render(data)

        assert '"gamma": 0.10000000000000001' in text
        assert '"omega_a": 1.0' in text
        assert json.loads(text)["metadata"]["gamma"] == 0.1

    def test_layout_matches_json_dumps(self):
        """Test indentation and separators follow json.dumps(indent=2, sort_keys=True)."""
        table = ResultTable.build("sweep", ["gamma", "ok"], [[0.5, True], [0.75, False]])
        report = ResultReport("sweep", (("n_atoms", 20), ("omega_a", 1.0)), (table,),
                              payload={"extra": {"b": [], "a": {}, "c": [None, -0.25, "x"]}})
        text = JSONReporter().render(report)

        assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"

    def test_payload_collision(self):
        """Test payload keys may not shadow report sections."""
        report = ResultReport("sweep", (), (ResultTable.build("sweep", ["gamma"], [[0.4]]),),
                              payload={"sweep": []})
        with pytest.raises(ValueError):
            JSONReporter().render(report)

    def test_collision_is_failed_result(self):
        """Test generate() turns render errors into a failed result."""
        report = ResultReport("sweep", (), (), payload={"command": "other"})
        result = JSONReporter().generate(report, stream=io.StringIO())

        assert not result.success
        assert "collides" in result.error_message


class TestJSONReporterGenerate:
    """Test JSONReporter.generate()."""

    def test_file(self, report, temp_dir):
        """Test writing and validating a file."""
        output = temp_dir / "critical.json"
        result = JSONReporter().generate(report, output)

        assert result.success
        assert result.validation_passed
        assert result.format == "json"
        assert json.loads(output.read_text(encoding='utf-8'))["command"] == "critical"


class TestJSONReporterValidate:
    """Test JSONReporter.validate_output()."""

    def test_invalid_json(self, temp_dir):
        """Test malformed files fail."""
        path = temp_dir / "bad.json"
        path.write_text("{", encoding='utf-8')
        is_valid, errors = JSONReporter().validate_output(path)

        assert not is_valid
        assert errors[0].startswith("Invalid JSON")

    def test_missing_fields(self, temp_dir):
        """Test command and metadata are required."""
        path = temp_dir / "partial.json"
        path.write_text('{"command": "sweep"}', encoding='utf-8')

        assert JSONReporter().validate_output(path) == (
            False, ["Missing required field(s): ['metadata']"])

    def test_not_an_object(self, temp_dir):
        """Test a top-level array fails."""
        path = temp_dir / "list.json"
        path.write_text("[]", encoding='utf-8')
        assert not JSONReporter().validate_output(path)[0]
