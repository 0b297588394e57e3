#!/usr/bin/env python3
"""Regenerate the default OCP tables in data/ocp from closed-form fits.

Graphite and NCM811 use the Chen et al. (2020) LG M50 fits, LFP uses the
Prada et al. (2013) fit. NCM523 reuses the NCM811 shape shifted down 35 mV.
"""
import math
import pathlib

N = 250
Y0, Y1 = 0.001, 0.999


def graphite(y):
    return (1.9793 * math.exp(-39.3631 * y) + 0.2482
            - 0.0909 * math.tanh(29.8538 * (y - 0.1234))
            - 0.04478 * math.tanh(14.9159 * (y - 0.2769))
            - 0.0205 * math.tanh(30.4444 * (y - 0.6103)))


def ncm811(y):
    return (-0.8090 * y + 4.4875
            - 0.0428 * math.tanh(18.5138 * (y - 0.5542))
            - 17.7326 * math.tanh(15.7890 * (y - 0.3117))
            + 17.5842 * math.tanh(15.9308 * (y - 0.3120)))


def ncm523(y):
    return ncm811(y) - 0.035


def lfpo(y):
    return 3.4077 - 0.020269 * y + 0.5 * math.exp(-150 * y) - 0.9 * math.exp(-30 * (1 - y))


CURVES = {"graphite": graphite, "ncm811": ncm811, "ncm523": ncm523, "lfpo": lfpo}


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "ocp"
    out.mkdir(parents=True, exist_ok=True)
    for tag, f in CURVES.items():
        lines = [f"# material={tag}", "# y U_V"]
        for i in range(N):
            y = Y0 + (Y1 - Y0) * i / (N - 1)
            lines.append(f"{y:.6f} {f(y):.12f}")
        (out / f"{tag}.dat").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
