"""Print every centrality measure on the ten-node kite graph side by side."""
from sociograph import centrality
from sociograph.generators import kite10


def main():
    g = kite10()
    cols = {
        "degree": centrality.degree(g),
        "eigenvector": centrality.eigenvector_centrality(g),
        "katz": centrality.katz_centrality(g),
        "pagerank": centrality.pagerank(g),
        "betweenness": centrality.betweenness(g, normalized=True),
    }
    print("node," + ",".join(cols))
    for u, label in sorted(enumerate(g.labels), key=lambda x: x[1]):
        print(label + "," + ",".join(f"{c.scores[u]:.4f}" for c in cols.values()))


if __name__ == "__main__":
    main()
