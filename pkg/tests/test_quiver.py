import pytest

from stacky_moduli.errors import BasisMismatch, NotInLambdaR, PathExplosion
from stacky_moduli.glps import build_cox_data, tilting_interval
from stacky_moduli.pipeline import weighted_line_23
from stacky_moduli.polyring import mono_mul
from stacky_moduli.quiver import PeirceBasis, build_quiver_of_sections, compute_relations, gamma_iso, label_key

ALL = ["p12", "p1", "w23", "w222", "f2"]


@pytest.fixture
def every(request, pipelines, f2):
    return f2 if request.param == "f2" else pipelines[request.param]


def arrows(P):
    Q = P.quiver
    return [(a.tail, a.head, Q.label_name(a)) for a in Q.arrows]


def classes(P):
    return [v.canonical[0] for v in P.vertices]


class TestArrows:
    def test_p12(self, p12):
        assert arrows(p12) == [(0, 1, "y1"), (0, 2, "y2"), (1, 2, "y1")]

    def test_w23(self, w23):
        v = classes(w23)
        assert v == [0, 2, 3, 4, 6]
        named = sorted((v[t], v[h], n) for t, h, n in arrows(w23))
        assert named == [(0, 2, "y1"), (0, 3, "y0"), (2, 4, "y1"), (3, 6, "y0"), (4, 6, "y1")]

    def test_p1_beilinson(self, p1):
        assert arrows(p1) == [(0, 1, "y0"), (0, 1, "y1")]

    def test_w222(self, w222):
        A = arrows(w222)
        assert len(A) == 6
        assert sorted(n for t, h, n in A if t == 0) == ["y0", "y1", "y2"]
        assert all(h == 4 for t, h, n in A if t != 0)

    def test_f2(self, f2):
        A = arrows(f2)
        assert len(A) == 8
        # u (degree h - 2f) only occurs multiplied by s or t
        assert sorted(n for _, _, n in A if "u" in n) == ["s*u", "t*u"]

    def test_zero_first(self):
        C = build_cox_data(weighted_line_23())
        T = tilting_interval(C)
        Q = build_quiver_of_sections(C, [T[2], T[0], T[1]])
        assert [v.canonical for v in Q.vertices] == [(0,), (3,), (2,)]

    def test_requires_zero(self):
        C = build_cox_data(weighted_line_23())
        with pytest.raises(ValueError):
            build_quiver_of_sections(C, tilting_interval(C)[1:])

    def test_distinct(self):
        C = build_cox_data(weighted_line_23())
        with pytest.raises(ValueError):
            T = tilting_interval(C)
            build_quiver_of_sections(C, [T[0], T[1], T[1]])

    def test_label_preference(self):
        assert sorted([(2, 0), (0, 1), (1, 1)], key=label_key) == [(0, 1), (2, 0), (1, 1)]

    @pytest.mark.parametrize("every", ALL, indirect=True)
    def test_label_degrees(self, every):
        Q, P = every.quiver, every.cox.presentation
        for a in Q.arrows:
            assert P.monomial_degree(a.label) == Q.vertices[a.head] - Q.vertices[a.tail]

    @pytest.mark.parametrize("every", ALL, indirect=True)
    def test_irreducible(self, every):
        Q = every.quiver
        for a in Q.arrows:
            for b in Q.arrows:
                for c in Q.arrows:
                    if b.tail == a.tail and c.tail == b.head and c.head == a.head:
                        assert mono_mul(b.label, c.label) != a.label


class TestRelations:
    def test_p12_none(self, p12):
        assert p12.algebra.relations == []

    def test_w23_none(self, w23):
        assert w23.algebra.relations == []

    def test_w222_one(self, w222):
        (r,) = w222.algebra.relations
        Q = w222.quiver
        assert (r.tail, r.head) == (0, 4)
        by_label = {Q.label_name(p[0]): c for p, c in r.coefficients.items()}
        assert by_label == {"y0": 1, "y1": 1, "y2": -1}
        assert all(Q.label_name(p[0]) == Q.label_name(p[1]) for p in r.coefficients)

    def test_format(self, w222):
        assert w222.algebra.relations[0].format(w222.quiver) == "1*[0][3] + -1*[1][4] + 1*[2][5]"

    @pytest.mark.parametrize("every", ALL, indirect=True)
    def test_sound(self, every):
        P = every.cox.presentation
        Q = every.quiver
        for r in every.algebra.relations:
            lam = Q.vertices[r.head] - Q.vertices[r.tail]
            total = [0] * P.hilbert_value(lam)
            for p, c in r.coefficients.items():
                assert p[0] in [a.id for a in Q.arrows_from(r.tail)]
                for k, x in enumerate(P.normal_form(Q.path_monomial(p), lam)):
                    total[k] += c * x
            assert not any(total)

    def test_path_budget(self):
        C = build_cox_data(weighted_line_23())
        Q = build_quiver_of_sections(C, tilting_interval(C))
        with pytest.raises(PathExplosion):
            compute_relations(Q, C, path_budget=1)


class TestPeirce:
    @pytest.mark.parametrize("every", ALL, indirect=True)
    def test_dimension(self, every):
        P, Q, PB = every.cox.presentation, every.quiver, every.peirce
        n = len(Q.vertices)
        for i in range(n):
            for j in range(n):
                lam = Q.vertices[j] - Q.vertices[i]
                if i == j:
                    assert PB.dimension(i, j) == 1
                elif Q.paths(i, j) and P.hilbert_value(lam):
                    assert PB.dimension(i, j) == P.hilbert_value(lam)

    def test_p12(self, p12):
        assert [p for p, _ in p12.peirce[0, 2]] == [(1,), (0, 2)]
        assert p12.peirce[2, 0] == []

    @pytest.mark.parametrize("every", ALL, indirect=True)
    def test_monomials_match_paths(self, every):
        Q = every.quiver
        for ij in every.peirce.pairs():
            for p, m in every.peirce[ij]:
                assert Q.path_monomial(p) == m


class TestGamma:
    def test_p12(self, p12):
        assert gamma_iso(p12.peirce, p12.lattices, 0, 1, 1, 2) == {(0,): (2,)}

    def test_identity(self, pipelines):
        for P in pipelines.values():
            for ij in P.peirce.pairs():
                g = gamma_iso(P.peirce, P.lattices, *ij, *ij)
                assert all(k == v for k, v in g.items())

    def test_w222(self, w222):
        Q = w222.quiver
        i = next(k for k, v in enumerate(Q.vertices) if v == w222.cox.generator_classes[0])
        (src, dst), = gamma_iso(w222.peirce, w222.lattices, 0, i, i, 4).items()
        assert Q.label_name(src[0]) == Q.label_name(dst[0]) == "y0"
        assert Q.arrows[dst[0]].tail == i

    def test_not_in_lambda_r(self, p12):
        with pytest.raises(NotInLambdaR):
            gamma_iso(p12.peirce, p12.lattices, 0, 1, 0, 2)

    def test_basis_mismatch(self, p12):
        bad = PeirceBasis({(0, 1): [((0,), (0, 1))], (1, 2): [((2,), (1, 0))]})
        with pytest.raises(BasisMismatch):
            gamma_iso(bad, p12.lattices, 0, 1, 1, 2)

    @pytest.mark.parametrize("name", ["w23", "w222"])
    def test_compose(self, pipelines, name):
        P = pipelines[name]
        PB, QL = P.peirce, P.lattices
        pairs = [ij for ij in PB.pairs() if PB[ij]]
        hits = 0
        for a in pairs:
            for b in pairs:
                if not QL.in_lambda_r(QL.kappa(*a, *b)):
                    continue
                for c in pairs:
                    if not QL.in_lambda_r(QL.kappa(*b, *c)):
                        continue
                    g1, g2, g3 = (gamma_iso(PB, QL, *x, *y) for x, y in ((a, b), (b, c), (a, c)))
                    assert {p: g2[g1[p]] for p in g1} == g3
                    hits += 1
        assert hits > len(pairs)
