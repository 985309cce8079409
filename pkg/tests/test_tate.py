"""Square-of-theories bookkeeping: exactness, assembly, localization."""

import pytest

from dihedralhz import ring, tate
from dihedralhz.abelian import FgAbGroup
from dihedralhz.dihedral import Grading, group_spec
from dihedralhz.groupcoh import closed_form_cohomology

SPEC3 = group_spec(3)

SAMPLE_GRADINGS = (
    Grading(0, 0, 0),
    Grading(-1, -1, 0),
    Grading(1, 1, -1),
    Grading(-3, 1, 1),
    Grading(2, -2, -2),
    Grading(-4, 2, 1),
    Grading(3, -1, -2),
)


def test_theory_values_at_zero():
    assert tate.theory_group_at(SPEC3, "borel_h", Grading(0, 0, 0))[0] == FgAbGroup(
        1, ()
    )
    assert tate.theory_group_at(SPEC3, "tilde", Grading(0, 0, 0))[0] == FgAbGroup(
        0, (6,)
    )
    # the periodic theory at zero carries both torsion lines
    assert tate.theory_group_at(SPEC3, "tate_t", Grading(0, 0, 0))[0] == FgAbGroup(
        0, (6,)
    )


def test_unknown_theory_tag():
    with pytest.raises(KeyError):
        tate.theory_group_at(SPEC3, "mystery", Grading(0, 0, 0))


def test_kc_sequences_exact_on_samples():
    for g in SAMPLE_GRADINGS:
        out = tate.kc_sequences(SPEC3, g)
        assert out["second_row_exact"], (g, out)
        assert out["second_row_rank"], (g, out)
        assert out["first_row_exact"], (g, out)
        assert out["first_row_rank"], (g, out)


def test_assembly_matches_closed_form_on_samples():
    for g in SAMPLE_GRADINGS:
        assert tate.assemble_at(SPEC3, g)[0] == ring.group_at(SPEC3, g)[0], g


def test_splitting_on_samples():
    for g in SAMPLE_GRADINGS:
        assert tate.splitting_check(SPEC3, g)["match"], g


def test_borel_matches_group_cohomology_closed_form():
    for g in SAMPLE_GRADINGS:
        out = tate.borel_vs_group_cohomology(
            SPEC3, g, lambda coeff, n: closed_form_cohomology(3, coeff, n)
        )
        assert out["match"], out


def test_localization_stabilizes():
    for euler in ("a_alpha", "a_gamma"):
        out = tate.localization_stabilization(SPEC3, Grading(0, 0, 0), euler, 8)
        assert out["stabilized"], out
        tail = out["tower"][out["stable_from"]:]
        assert all(row["match"] for row in tail)


def test_localization_step_bounds():
    with pytest.raises(tate.WindowExceeded):
        tate.localization_stabilization(SPEC3, Grading(0, 0, 0), "a_alpha", 0)
    with pytest.raises(tate.WindowExceeded):
        tate.localization_stabilization(SPEC3, Grading(0, 0, 0), "a_alpha", 65)
    with pytest.raises(KeyError):
        tate.localization_stabilization(SPEC3, Grading(0, 0, 0), "a_beta", 4)


def test_tilde_integer_degrees():
    # integer-graded wedge values repeat with period four
    want = {
        0: FgAbGroup(0, (6,)),
        1: FgAbGroup.zero(),
        2: FgAbGroup(0, (2,)),
        3: FgAbGroup.zero(),
        4: FgAbGroup(0, (6,)),
    }
    for n, group in want.items():
        got = tate.theory_group_at(SPEC3, "tilde", Grading(n, 0, 0))[0]
        assert got == group, n
