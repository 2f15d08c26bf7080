"""JSON encodings of four-vectors, spinors and one- and two-particle states.

* four-vector: ``[v0, v1, v2, v3]``
* complex number: ``[re, im]``; spinor: list of 4 complex numbers
* particle state::

    {"modes": [{"coefficient": [re, im], "p": [...], "branch": 1, "w": [...]}],
     "l": 0.5 | null, "chi": 0.3 | null, "axis": [0, 0, 0, 1] | null}

* two-particle state: ``{"terms": [{"coefficient": [re, im], "left": state, "right": state}]}``
"""
from __future__ import annotations

import numpy as np

from .states import ParticleState, PlaneWaveMode, TwoParticleState


def encode_complex(c) -> list[float]:
    c = complex(c)
    return [c.real, c.imag]


def decode_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    re, im = v
    return complex(re, im)


def encode_vector(v) -> list[float]:
    return [float(x) for x in v]


def encode_spinor(w) -> list[list[float]]:
    return [encode_complex(x) for x in w]


def decode_spinor(data) -> np.ndarray:
    return np.array([decode_complex(x) for x in data], dtype=complex)


def encode_state(state: ParticleState) -> dict:
    return {
        "modes": [
            {
                "coefficient": encode_complex(c),
                "p": encode_vector(mode.p),
                "branch": mode.branch,
                "w": encode_spinor(mode.w),
            }
            for c, mode in state.modes
        ],
        "l": state.l,
        "chi": state.chi,
        "axis": None if state.axis is None else encode_vector(state.axis),
    }


def decode_state(data: dict) -> ParticleState:
    modes = tuple(
        (
            decode_complex(m.get("coefficient", [1.0, 0.0])),
            PlaneWaveMode(tuple(m["p"]), int(m["branch"]), decode_spinor(m["w"])),
        )
        for m in data["modes"]
    )
    axis = data.get("axis")
    return ParticleState(modes, l=data.get("l"), chi=data.get("chi"), axis=None if axis is None else tuple(axis))


def encode_two_particle(state: TwoParticleState) -> dict:
    return {
        "terms": [
            {"coefficient": encode_complex(c), "left": encode_state(l), "right": encode_state(r)}
            for c, l, r in state.terms
        ]
    }


def decode_two_particle(data: dict) -> TwoParticleState:
    return TwoParticleState(
        tuple(
            (decode_complex(t.get("coefficient", [1.0, 0.0])), decode_state(t["left"]), decode_state(t["right"]))
            for t in data["terms"]
        )
    )
