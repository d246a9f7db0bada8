#!/usr/bin/env python3
"""Independent evaluation of the air-to-ground channel golden vectors.

Writes (or checks) tests/data/channel_golden.json. Uses only the Python
standard library so it shares no code path with the C++ implementation.
"""
import argparse
import json
import math
import sys

C = 299_792_458.0
URBAN = dict(a=9.61, b=0.16, eta_los=1.0, eta_nlos=20.0)
FC = 2e9
PT_W = 5.0
B_HZ = 15e6
N0_DBM_HZ = -174.0


def p_los(theta_deg, env=URBAN):
    return 1.0 / (1.0 + env["a"] * math.exp(-env["b"] * (theta_deg - env["a"])))


def pathloss(h, r, env=URBAN, fc=FC):
    d = math.hypot(h, r)
    theta = 90.0 if r == 0 else math.degrees(math.atan2(h, r))
    p = p_los(theta, env)
    fspl = 20.0 * math.log10(4.0 * math.pi * fc * d / C)
    return fspl + p * env["eta_los"] + (1.0 - p) * env["eta_nlos"]


def spectral_eff(pl_db):
    pt_dbm = 10.0 * math.log10(PT_W * 1000.0)
    noise_dbm = N0_DBM_HZ + 10.0 * math.log10(B_HZ)
    snr_db = pt_dbm - pl_db - noise_dbm
    return math.log2(1.0 + 10.0 ** (snr_db / 10.0))


def golden():
    return {
        "los_at_a_degrees": p_los(URBAN["a"]),
        "los_at_90_degrees": p_los(90.0),
        "los_at_0_degrees": p_los(0.0),
        "pathloss_h400_r0_db": pathloss(400.0, 0.0),
        "pathloss_h400_r1000_db": pathloss(400.0, 1000.0),
        "spectral_eff_pl100": spectral_eff(100.0),
        "spectral_eff_pl120": spectral_eff(120.0),
        "bandwidth_2mbps_pl120_hz": 2e6 / spectral_eff(120.0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", help="write golden JSON to this path")
    ap.add_argument("--check", help="compare against this golden JSON")
    args = ap.parse_args()
    values = golden()
    if args.write:
        with open(args.write, "w") as f:
            json.dump(values, f, indent=2, sort_keys=True)
            f.write("\n")
    if args.check:
        with open(args.check) as f:
            frozen = json.load(f)
        bad = [k for k, v in values.items()
               if k not in frozen or abs(frozen[k] - v) > 1e-12 * max(1.0, abs(v))]
        if bad:
            print("mismatch:", bad)
            return 1
    if not args.write and not args.check:
        json.dump(values, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
