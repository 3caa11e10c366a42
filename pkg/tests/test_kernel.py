import random

from nutgraphs.graphs import build_graph
from nutgraphs.kernel import (
    _certified_nullity_large,
    _verify_kernel_vector,
    nullspace,
    nut_certificate,
)

from .oracles import rational_nullity


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def random_graph(rng, n, p=0.4):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


def test_c4_nullity_two():
    assert nullspace(cycle(4)).nullity == 2


def test_p3_kernel_vector():
    kb = nullspace(build_graph(3, [(0, 1), (1, 2)]))
    assert kb.nullity == 1
    assert kb.basis == ((1, 0, -1),)


def test_no_cycle_is_a_nut():
    # cycle eigenvalues are 2cos(2*pi*k/n): nullity 2 when 4 | n, else 0,
    # so no cycle ever has nullity 1
    for n in range(3, 12):
        cert = nut_certificate(cycle(n))
        assert not cert.is_nut
        assert nullspace(cycle(n)).nullity == (2 if n % 4 == 0 else 0)


def test_p3_not_nut_middle_zero():
    cert = nut_certificate(build_graph(3, [(0, 1), (1, 2)]))
    assert not cert.is_nut
    assert cert.failure_reason == "zero entry at vertex 1"


def test_k1_not_nut():
    cert = nut_certificate(build_graph(1, []))
    assert not cert.is_nut
    assert cert.failure_reason == "order < 2"


def test_disconnected_not_nut():
    cert = nut_certificate(build_graph(4, [(0, 1), (2, 3)]))
    assert not cert.is_nut
    assert cert.failure_reason == "disconnected"


def test_two_cliques_bridged_kernel():
    edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    edges += [(u + 5, v + 5) for u in range(5) for v in range(u + 1, 5)]
    edges += [(0, 5), (0, 6), (1, 5), (1, 6)]
    cert = nut_certificate(build_graph(10, edges))
    assert cert.is_nut
    # +1 on the four bridge-cycle vertices, -1 on the remaining six
    expect = {0: 1, 1: 1, 5: 1, 6: 1}
    assert cert.kernel_vector == tuple(expect.get(v, -1) for v in range(10))


NUTS7 = [
    [(0, 3), (0, 5), (1, 4), (1, 6), (2, 5), (2, 6), (3, 6), (4, 6)],
    [(0, 3), (0, 4), (0, 5), (0, 6), (1, 4), (1, 6), (2, 5), (2, 6), (3, 4),
     (3, 5), (3, 6), (4, 5)],
    [(0, 3), (0, 4), (0, 5), (0, 6), (1, 4), (1, 6), (2, 5), (2, 6), (3, 6),
     (4, 5), (4, 6), (5, 6)],
]


def _check_sound(g):
    cert = nut_certificate(g)
    if cert.is_nut:
        assert cert.nullity == 1
        assert _verify_kernel_vector(g, cert.kernel_vector)
        assert all(abs(x) >= 1 for x in cert.kernel_vector)
        # sign normalisation: first nonzero entry positive
        assert next(x for x in cert.kernel_vector if x) > 0
    return cert.is_nut


def test_certificate_soundness():
    # positive cases: the three order-7 nut graphs
    for edges in NUTS7:
        assert _check_sound(build_graph(7, edges))
    # random graphs are almost never nuts; the verdict must stay sound anyway
    rng = random.Random(21)
    for _ in range(400):
        _check_sound(random_graph(rng, rng.randint(2, 9), rng.uniform(0.2, 0.8)))


def test_nullity_matches_rational_oracle():
    rng = random.Random(22)
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 8), rng.uniform(0.1, 0.9))
        assert nullspace(g).nullity == rational_nullity(g)


def test_modular_path_matches_bareiss():
    rng = random.Random(23)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 12), rng.uniform(0.2, 0.7))
        nullity, vecs = _certified_nullity_large(g)
        assert nullity == nullspace(g).nullity
        for v in vecs:
            assert _verify_kernel_vector(g, v)


def test_hint_is_verified_not_trusted():
    g = build_graph(3, [(0, 1), (1, 2)])
    bogus = (5, 7, 11)
    cert = nut_certificate(g, kernel_hint=bogus)
    assert not cert.is_nut  # falls back to the real kernel (1, 0, -1)
    assert cert.failure_reason == "zero entry at vertex 1"


def test_large_graph_uses_modular_path():
    # grow an order-7 nut past the direct-elimination threshold by
    # repeated 4-fold subdivision (which preserves nut-ness)
    from nutgraphs.graphs import subdivide_edge

    g = build_graph(7, [(0, 3), (0, 5), (1, 4), (1, 6), (2, 5), (2, 6), (3, 6), (4, 6)])
    base = nut_certificate(g)
    assert base.is_nut
    while g.n <= 100:
        g, _ = subdivide_edge(g, g.edges[0], 4)
    cert = nut_certificate(g)
    assert cert.is_nut
    assert _verify_kernel_vector(g, cert.kernel_vector)
