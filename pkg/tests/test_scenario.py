"""Scenario grammar: strict parsing with full error collection."""

import pytest

from robindce.scenario import (
    ScenarioError,
    bundled_scenario_path,
    load_scenario,
    parse_scenario_text,
)

BUNDLED = ("fig1_left", "fig1_right", "fig2_left", "fig2_right",
           "cavity_demo", "identities")

MINIMAL_SEMIOPEN = """
[geometry]
kind = semiopen

[regime]
kind = robin_far
lambda = 0.44 mm

[drive]
type = sinusoid
epsilon = 0.25 dimensionless
omega_d = 0.155 mm^-1
t0 = 0.0 mm
tf = 40.5 mm
"""


class TestBundled:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_all_bundled_scenarios_validate(self, name):
        scn = load_scenario(name)
        assert scn.geometry["kind"] in ("semiopen", "cavity")

    def test_fig1_left_values(self):
        scn = load_scenario("fig1_left")
        assert scn.regime["lambda"] == 0.44
        assert scn.drive["epsilon"] == 0.25
        assert scn.drive["omega_d"] == 0.155
        assert scn.drive["type"] == "ramped_sinusoid"
        assert scn.analysis["kbar_points"] == 400

    def test_cavity_demo_has_two_drives(self):
        scn = load_scenario("cavity_demo")
        assert len(scn.drives) == 2
        assert scn.drives[0]["epsilon"] == 0.01
        assert scn.drives[1]["epsilon"] == 0.007

    def test_identities_lists(self):
        scn = load_scenario("identities")
        assert scn.analysis["a_values"] == (0.04, 0.02, 0.01)
        assert scn.analysis["k_pairs"] == ((1.0, 1.0), (1.0, 2.0))

    def test_unknown_bundled_name(self):
        assert bundled_scenario_path("no_such_scenario") is None
        with pytest.raises(FileNotFoundError):
            load_scenario("no_such_scenario")


class TestParsing:
    def test_minimal_semiopen_parses(self):
        scn = parse_scenario_text(MINIMAL_SEMIOPEN)
        assert scn.regime["kind"] == "robin_far"
        assert scn.analysis == {}

    def test_empty_file_reports_all_missing_sections(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text("")
        text = str(err.value)
        assert "[geometry]" in text
        assert "[regime]" in text
        assert "drive" in text

    def test_wrong_unit_names_the_field(self):
        bad = MINIMAL_SEMIOPEN.replace("0.44 mm", "0.44 mm^-1")
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text(bad)
        assert "[regime] lambda" in str(err.value)
        assert "mm^-1" in str(err.value)

    def test_missing_unit_rejected(self):
        bad = MINIMAL_SEMIOPEN.replace("0.44 mm", "0.44")
        with pytest.raises(ScenarioError, match="missing unit"):
            parse_scenario_text(bad)

    def test_unknown_key_and_section(self):
        bad = MINIMAL_SEMIOPEN + "\nwobble = 3 mm\n[mystery]\nx = 1 mm\n"
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text(bad)
        assert "unknown key" in str(err.value)
        assert "unknown section" in str(err.value)

    def test_duplicate_key_reports_first_line(self):
        bad = MINIMAL_SEMIOPEN + "\n[analysis]\nkbar_points = 10\nkbar_points = 20\n"
        with pytest.raises(ScenarioError, match="duplicate key"):
            parse_scenario_text(bad)

    def test_all_problems_collected_in_one_pass(self):
        bad = MINIMAL_SEMIOPEN.replace("0.44 mm", "oops mm")
        bad = bad.replace("type = sinusoid", "type = warble")
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text(bad)
        assert len(err.value.problems) >= 2

    def test_cavity_needs_length_and_two_drives(self):
        bad = MINIMAL_SEMIOPEN.replace("kind = semiopen", "kind = cavity")
        bad = bad.replace("kind = robin_far\nlambda = 0.44 mm",
                          "kind = robin_far\nkappa1 = 1.0 dimensionless\n"
                          "kappa2 = 1.0 dimensionless")
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text(bad)
        text = str(err.value)
        assert "length" in text
        assert "drive1" in text

    def test_near_dirichlet_needs_amplitude(self):
        bad = MINIMAL_SEMIOPEN.replace("kind = robin_far\nlambda = 0.44 mm",
                                       "kind = robin_near_dirichlet")
        with pytest.raises(ScenarioError, match="b_amplitude"):
            parse_scenario_text(bad)

    def test_time_ordering_enforced(self):
        bad = MINIMAL_SEMIOPEN.replace("tf = 40.5 mm", "tf = -1.0 mm")
        with pytest.raises(ScenarioError, match="tf must exceed t0"):
            parse_scenario_text(bad)

    def test_malformed_pair_rejected(self):
        bad = MINIMAL_SEMIOPEN + "\n[analysis]\nk_pairs = 1:2:3 mm^-1\n"
        with pytest.raises(ScenarioError, match="pair"):
            parse_scenario_text(bad)

    def test_comments_and_blank_lines_ignored(self):
        text = MINIMAL_SEMIOPEN.replace("[drive]", "# leading comment\n\n[drive]")
        text = text.replace("epsilon = 0.25 dimensionless",
                            "epsilon = 0.25 dimensionless  # inline")
        scn = parse_scenario_text(text)
        assert scn.drive["epsilon"] == 0.25

    def test_entry_outside_section(self):
        with pytest.raises(ScenarioError, match="outside any section"):
            parse_scenario_text("kind = semiopen\n" + MINIMAL_SEMIOPEN)

    def test_load_from_path(self, tmp_path):
        p = tmp_path / "case.scenario"
        p.write_text(MINIMAL_SEMIOPEN)
        scn = load_scenario(p)
        assert scn.source == str(p)
