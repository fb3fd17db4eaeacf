import random

from lpa import graphs as G


def random_graph(rng, max_vertices=6, max_edges=12, allow_sinks=True):
    n = rng.randint(1, max_vertices)
    vertices = tuple("a%d" % i for i in range(n))
    m = rng.randint(0, max_edges)
    edges = []
    for j in range(m):
        edges.append(("x%d" % j, rng.choice(vertices), rng.choice(vertices)))
    g = G.Graph(vertices, tuple(edges))
    if not allow_sinks:
        extra = []
        for v in vertices:
            if g.out_degree(v) == 0:
                extra.append(("x%d" % (m + len(extra)), v, rng.choice(vertices)))
        g = G.Graph(vertices, g.edges + tuple(extra))
    return g


def random_spi_graph(rng, max_vertices=6):
    """Rejection-sample an SPI graph with a spliceable vertex."""
    while True:
        g = random_graph(rng, max_vertices=max_vertices,
                         max_edges=3 * max_vertices, allow_sinks=False)
        if not G.is_spi(g).is_spi:
            continue
        for v in g.vertices:
            if G.supports_two_return_paths(g, v):
                return g, v


def make_rng(seed):
    return random.Random(seed)
