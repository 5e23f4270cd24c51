"""Built-in example corpus with pinned expected values.

Every entry is a problem document in the same schema the CLI accepts,
plus the expected results the corpus run asserts against.  The entries
cover: symmetric algebras in characteristic 0, the classical and
restricted PBW theorems, a one-relation inhomogeneous quotient of a
diagonal braiding, a combinatorial-rank-2 braiding, and the tensor
algebra of that braiding presented as the envelope of its primitives
(the standing counterexample to all four PBW-type criteria).
"""

CORPUS: dict[str, dict] = {
    "flip-d2-char0": {
        "spec": {
            "field": "Q",
            "dimension": 2,
            "braiding": {"diagonal": [["1", "1"], ["1", "1"]]},
            "bracket": {"kind": "trivial"},
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 3, 4, 5, 6, 7], "agree": True},
            "rank": {"rank": 1},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "flip-d3-char0": {
        "spec": {
            "field": "Q",
            "dimension": 3,
            "braiding": {"diagonal": [["1"] * 3] * 3,},
            "bracket": {"kind": "trivial"},
            "truncation": 5,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 3, 6, 10, 15, 21], "agree": True},
            "rank": {"rank": 1},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "sl2": {
        "spec": {
            "field": "Q",
            "dimension": 3,
            "labels": ["e", "h", "f"],
            "braiding": {"diagonal": [["1"] * 3] * 3},
            "bracket": {
                "kind": "lie_flip",
                "constants": {"0,1": {"0": "-2"}, "0,2": {"1": "1"}, "1,2": {"2": "-2"}},
            },
            "truncation": 5,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 3, 6, 10, 15, 21], "agree": True},
            "rank": {"rank": 1},
            "envelope": {"graded_dims": [1, 3, 6, 10, 15, 21], "stable": True},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "restricted-gf2-abelian": {
        "spec": {
            "field": "GF(2)",
            "dimension": 2,
            "braiding": {"diagonal": [["1", "1"], ["1", "1"]]},
            "bracket": {"kind": "restricted_flip", "constants": {}, "pmap": [{}, {}]},
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 1, 0, 0, 0, 0], "agree": True},
            "rank": {"rank": 1},
            "envelope": {"graded_dims": [1, 2, 1, 0, 0, 0, 0], "total_dim": 4},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "restricted-gf3": {
        "spec": {
            "field": "GF(3)",
            "dimension": 2,
            "braiding": {"diagonal": [["1", "1"], ["1", "1"]]},
            "bracket": {"kind": "restricted_flip", "constants": {}, "pmap": [{}, {}]},
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 3, 2, 1, 0, 0], "agree": True},
            "rank": {"rank": 1},
            "envelope": {"graded_dims": [1, 2, 3, 2, 1, 0, 0], "total_dim": 9},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "stumbo": {
        "spec": {
            "field": "Q",
            "dimension": 2,
            "braiding": {"diagonal": [["2", "1"], ["1", "1"]]},
            "bracket": {
                "kind": "rank1_map",
                "pairs": [
                    {"element": {"2:2": "1", "2:1": "-1"}, "image": {"0": "1"}}
                ],
            },
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 3, 4, 5, 6, 7], "agree": True},
            "rank": {"rank": 1},
            "envelope": {"graded_dims": [1, 2, 3, 4, 5, 6, 7], "stable": True},
            "pbw-basis": {
                "degree_2": ["x_1 x_1", "x_1 x_2", "x_2 x_2"],
            },
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "kharchenko": {
        "spec": {
            "field": "Q",
            "dimension": 2,
            "braiding": {"diagonal": [["-1", "1"], ["-1", "-1"]]},
            "bracket": {"kind": "trivial"},
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 2, 2, 1, 0, 0], "agree": True},
            "rank": {"rank": 2},
            "crosscheck": {
                "pbw_type": True,
                "strictly_generated": True,
                "cosymmetric": True,
                "lifting_ok": True,
            },
        },
    },
    "kharchenko-envelope-fixture": {
        "spec": {
            "field": "Q",
            "dimension": 2,
            "braiding": {"diagonal": [["-1", "1"], ["-1", "-1"]]},
            "bracket": {"kind": "primitive_envelope"},
            "truncation": 6,
            "headroom": 2,
        },
        "expect": {
            "nichols": {"tower": [1, 2, 2, 2, 1, 0, 0], "agree": True},
            "rank": {"rank": 2},
            "crosscheck": {
                "pbw_type": False,
                "strictly_generated": False,
                "cosymmetric": False,
                "lifting_ok": False,
            },
        },
    },
}
