import json
from functools import lru_cache

import pytest

from fakeplanes import families as fam
from fakeplanes.exactalg import f2_is_isomorphism, f2_rank
from fakeplanes.homology import inclusion_matrix, real_plane_verdict
from fakeplanes.lattice import galois_h2, h2_induced
from fakeplanes.surface import graphs_isomorphic

ALL_CASES = [(info.name, params) for info in fam.list_families() for params in fam.sweep_parameters(info)]


@pytest.mark.parametrize("name,params", ALL_CASES, ids=[f"{n}-{i}" for i, (n, _) in enumerate(ALL_CASES)])
def test_every_family_verifies(name, params):
    result = fam.verify_family(name, params)
    assert result.ok, result.mismatches


@lru_cache(maxsize=None)
def _built(name, frozen):
    return fam.construct(name, json.loads(frozen))


def built(name, params=None):
    return _built(name, json.dumps(params or {}, sort_keys=True))


def _model_cases():
    for name, params in ALL_CASES:
        c = built(name, params)
        if c.model is not None:
            yield name, params, c.model


@pytest.mark.parametrize("name,params,model", list(_model_cases()),
                         ids=lambda x: x if isinstance(x, str) else "")
def test_h2_general_algorithm_against_mod2_reduction(name, params, model):
    m = inclusion_matrix(model)
    general = f2_is_isomorphism(h2_induced(m))
    if m.source.is_trivially_real() and m.target.is_trivially_real():
        # second route: with trivial involution H2 is the mod-2 reduction
        mat = m.matrix
        mod2 = mat.is_square() and f2_rank(mat.mod2()) == mat.ncols
        assert general == mod2
    else:
        for lat in (m.source, m.target):
            fixed = sum(1 for i, j in enumerate(lat.involution) if i == j)
            assert galois_h2(lat).dimension == fixed


def test_some_family_has_conjugate_curves():
    kinds = {not model.lattice.is_trivially_real() for _, _, model in _model_cases()}
    assert kinds == {True, False}


def test_gentype_graphs_pairwise_distinct():
    # the singular quartic looks alike in all three before resolution; the log resolutions differ
    gs = [built(f"gentype_s{i}").graph for i in (1, 2, 3)]
    for i in range(3):
        for j in range(i + 1, 3):
            assert not graphs_isomorphic(gs[i], gs[j])
        assert graphs_isomorphic(gs[i], gs[i])


VALID_TRICUSPIDAL = [(4 * nu + e, nu) for nu in range(1, 7) for e in (-1, 1)]


@pytest.mark.parametrize("mu,nu", VALID_TRICUSPIDAL)
def test_tricuspidal_all_valid_parameters(mu, nu):
    result = fam.verify_family("tricuspidal", {"mu": mu, "nu": nu})
    assert result.ok, result.mismatches
    assert result.construction.computed["companion_torsion_order"] == abs(2 * nu - mu)


@pytest.mark.parametrize("mu,nu", [(6, 1), (4, 1), (8, 2), (2, 3)])
def test_tricuspidal_invalid_parameters(mu, nu):
    with pytest.raises(fam.ParameterError, match="4\\*nu - mu"):
        fam.construct("tricuspidal", {"mu": mu, "nu": nu})


@pytest.mark.parametrize("star", [[0] * 5, [1, 2, 3, 4, 5], [-7, 0, 11, 2, -1]])
def test_e6_verdict_independent_of_free_column(star):
    result = fam.verify_family("e6_cubic", {"star": star})
    assert result.ok, result.mismatches
    assert result.verdict.h1_torsion == (3,)


def test_e6_free_column_length_checked():
    with pytest.raises(fam.ParameterError):
        fam.construct("e6_cubic", {"star": [1, 2]})


@pytest.mark.parametrize("name,params,fragment", [
    ("kod1_generic", {"mu_plus": [2, 2]}, "positivity"),
    ("kod1_generic", {"mu_plus": [2, 4]}, "unimodularity"),
    ("kod1_generic", {"r0": 0}, "r0"),
    ("h_2p", {"p": 0}, "p"),
    ("h_2p", {"p": "x"}, "integer"),
    ("neg_kappa_hypersurface", {"m": [2], "p": [4]}, None),
    ("kod1_conjugate", {"nu_minus": [1], "nu_plus": [2]}, None),
])
def test_invalid_parameters_rejected(name, params, fragment):
    with pytest.raises(fam.ParameterError, match=fragment):
        fam.construct(name, params)


def test_unknown_family():
    with pytest.raises(fam.FamilyError):
        fam.construct("no_such_family")


def test_generated_script_matches_hand_written_data():
    # the y333 generator and the bundled data describe the same surface
    gen = fam.run_construction(fam.y333_script())
    data = fam.run_construction(fam.load_construction("y333"))
    assert gen.models.keys() == data.models.keys()
    for stage in gen.models:
        assert gen[stage].dual_graph().same_as(data[stage].dual_graph()) == []


def test_published_y333_matrix_recorded_with_det_sign_note():
    c = fam.construct("y333")
    assert c.computed["published_det"] == 9
    assert "-9" in dict(c.expected.extra)["published_det"].note


def test_expected_facts_are_consistent():
    with pytest.raises(fam.FamilyError):
        fam.ExpectedFacts(z_acyclic=fam.Fact(True, fam.published("x")),
                          h1_torsion=fam.Fact([2], fam.published("x")))


def test_every_fact_has_provenance():
    for name, params in ALL_CASES:
        for _, fact in built(name, params).expected.items():
            assert fact.provenance.kind in ("published", "derived") and fact.provenance.detail


def test_mismatch_is_reported_not_hidden():
    c = fam.construct("conic_complement")
    c.expected = fam.ExpectedFacts(det_j=fam.Fact(5, fam.derived("wrong on purpose")))
    r = fam.verify_construction(c)
    assert not r.ok and r.mismatches == ["det_j: expected 5, got 2"]


def test_verdict_agrees_with_direct_engine_call():
    result = fam.verify_family("h_2p", {"p": 2})
    v = real_plane_verdict(result.construction.model)
    assert v == result.verdict and v.real_plane
