from __future__ import annotations

from fractions import Fraction

import pytest

from onepw import bounds, common
from onepw.embedding import PlaneEmbedding
from tests import utils

TRIANGLE_EDGES = ((0, 1), (1, 2), (0, 2))
TRIANGLE_ROTATION = ((0, 4), (1, 2), (3, 5))


def square() -> PlaneEmbedding:
    return PlaneEmbedding(4, ((0, 1), (1, 2), (2, 3), (3, 0)), ((0, 7), (1, 2), (3, 4), (5, 6)))


@pytest.mark.parametrize(("n", "expected"), [(4, 4), (5, 6), (6, 9), (7, 12), (8, 16), (10, 22)])
def test_karpov_bound(n: int, expected: int) -> None:
    assert bounds.karpov_bound(n) == expected


def test_closed_forms() -> None:
    assert bounds.czap_bound(9, 3) == 20
    assert bounds.main_bound(9, 3) == 18
    assert bounds.main_bound(10, 3) == 20
    assert bounds.removal_lower_bound(3, 7) == 1
    assert bounds.removal_lower_bound(3, 6) == 0
    assert bounds.removal_lower_bound(4, 10) == 8


def test_closed_form_grid() -> None:
    for n in range(4, 41):
        assert bounds.karpov_bound(n) == (3 * n - 9 if n % 2 == 1 or n == 6 else 3 * n - 8)
    for x in range(2, 21):
        for y in range(x, 21):
            assert bounds.czap_bound(x + y, x) == 2 * (x + y) + 6 * x - 16
            assert bounds.main_bound(x + y, x) == 2 * (x + y) + 4 * x - 12
            assert bounds.removal_lower_bound(x, y) == max(0, (x - 2) * (y - 6))


def test_main_bound_below_czap_bound() -> None:
    for x in range(2, 51):
        for n in range(2 * x, 2 * x + 50):
            assert bounds.main_bound(n, x) <= bounds.czap_bound(n, x)


def test_main_bound_below_karpov_bound() -> None:
    checked = 0
    for x in range(2, 21):
        for y in range(x, 101):
            if 3 * x <= y + 4:
                assert bounds.main_bound(x + y, x) <= bounds.karpov_bound(x + y)
                checked += 1
    assert checked > 1000


def test_closed_forms_invalid() -> None:
    with pytest.raises(common.ArgumentError, match=r"^Vertex count must be at least 4 \(n=3\)$"):
        bounds.karpov_bound(3)
    with pytest.raises(common.ArgumentError, match=r"^Requires 2 <= x <= n - x"):
        bounds.main_bound(5, 3)
    with pytest.raises(common.ArgumentError, match=r"^Requires 2 <= x <= n - x"):
        bounds.czap_bound(4, 1)
    with pytest.raises(common.ArgumentError, match=r"^Requires 2 <= x <= y \(x=4, y=3\)$"):
        bounds.removal_lower_bound(4, 3)


def test_lemma7_triangle() -> None:
    verdict = bounds.lemma7_check(PlaneEmbedding(3, TRIANGLE_EDGES, TRIANGLE_ROTATION))
    assert verdict.faces == 2
    assert verdict.bound == 3
    assert verdict.holds


def test_lemma7_isolated_vertex() -> None:
    embedding = PlaneEmbedding(4, TRIANGLE_EDGES, (*TRIANGLE_ROTATION, ()))
    verdict = bounds.lemma7_check(embedding)
    assert verdict.components == 2
    assert verdict.faces == 1
    assert verdict.bound == Fraction(7, 2)
    remark = bounds.lemma7_check(embedding, remark=True)
    assert remark.vertices == 3
    assert remark.bound == 3


def test_lemma7_invalid() -> None:
    with pytest.raises(common.ArgumentError, match=r"^Plane graph must be simple$"):
        bounds.lemma7_check(PlaneEmbedding(2, ((0, 1), (1, 0)), ((0, 3), (1, 2))))
    with pytest.raises(common.ArgumentError, match=r"^Requires at least 3 non-isolated vertices"):
        bounds.lemma7_check(PlaneEmbedding(3, ((0, 1),), ((0,), (1,), ())), remark=True)


def test_lemma8() -> None:
    verdict = bounds.lemma8_check(square())
    assert verdict.faces == 0
    assert verdict.bound == 4
    assert verdict.holds
    with pytest.raises(common.ArgumentError, match=r"^Plane graph has an odd cycle$"):
        bounds.lemma8_check(PlaneEmbedding(3, TRIANGLE_EDGES, TRIANGLE_ROTATION))


def test_lemma8_isolated_vertex() -> None:
    s = square()
    embedding = PlaneEmbedding(5, s.edges, (*s.rotation, ()))
    verdict = bounds.lemma8_check(embedding)
    assert verdict.components == 2
    assert verdict.bound == 5
    remark = bounds.lemma8_check(embedding, remark=True)
    assert remark.vertices == 4
    assert remark.components == 1
    assert remark.bound == 4
    assert remark.holds


def test_certify_k36() -> None:
    certificate = bounds.certify(utils.corpus_drawing("k36.drawing"), name="K3,6")
    assert certificate.status == "PASS"
    assert certificate.failed_hypothesis is None
    assert certificate.quantity("E(H)") == "6"
    assert certificate.quantity("A") == "3"
    assert certificate.quantity("t") == "2"
    assert certificate.quantity("t3") == "2"
    assert str(certificate.line("E<=2V+4x-12-t0/2")) == "E<=2V+4x-12-t0/2: 18<=18 PASS"
    assert certificate.text().startswith("V=9\nE=18\nx=3\ny=6\nW=6\n")
    assert certificate.text().endswith("E<=2V+4x-12-t0/2: 18<=18 PASS\n")


def test_certify_k33() -> None:
    certificate = bounds.certify(utils.corpus_drawing("k33.drawing"))
    assert certificate.status == "PASS"
    assert str(certificate.line("E<=2V+4x-12-t0/2")) == "E<=2V+4x-12-t0/2: 9<=12 PASS"


def test_certify_c4() -> None:
    certificate = bounds.certify(utils.corpus_drawing("c4.drawing"))
    assert certificate.status == "PASS"
    assert str(certificate.line("E<=2y")) == "E<=2y: 4<=4 PASS"
    assert certificate.line("E(H')<=2x-4+t/2").status == "SKIP"


def test_certify_separating() -> None:
    certificate = bounds.certify(utils.corpus_drawing("separating.drawing"))
    assert certificate.status == "HYPOTHESIS"
    assert certificate.failed_hypothesis == "no-separating-2-cycles"
    assert certificate.lines[-1].note == "w=10,11 x=0,1"


def test_certify_invalid() -> None:
    with pytest.raises(common.StructuralError, match=r"^Invalid drawing: "):
        bounds.certify(utils.corpus_drawing("degree3.drawing"))


def test_certificate_line() -> None:
    line = bounds.CertificateLine("a", "PASS", Fraction(1, 2), "<=", Fraction(1))
    assert str(line) == "a: 1/2<=1 PASS"
    assert str(bounds.CertificateLine("b", "SKIP", note="why")) == "b: SKIP why"
    assert str(bounds.CertificateLine("c", "PASS")) == "c: PASS"
