# Regenerates the bundled experiment configs under configs/.
import json, os
out = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'configs')
for f in os.listdir(out):
    if f.endswith('.json'): os.remove(os.path.join(out, f))

def cat(kind, params=None, case='generic', classic=False):
    d = {"catalog": {"kind": kind, "params": params or {}, "case": case}}
    if classic: d["classic"] = True
    return d

def chirp(n=2**18):
    return {"detfun": {"kind": "chirp", "params": {"alpha": 1, "beta": 1, "t0": 0.5}}, "grid": {"t_start": 0, "t_end": 1, "n": n + 1}}

def cantor(alpha=0.5, n=2**18):
    return {"detfun": {"kind": "cantor_f_alpha", "params": {"alpha": alpha}, "depth": 40}, "grid": {"t_start": 0, "t_end": 1, "n": n + 1}}

def power(alpha, n=2**16):
    return {"detfun": {"kind": "power", "params": {"alpha": alpha, "t0": 0.5}}, "grid": {"t_start": 0, "t_end": 1, "n": n + 1}}

def proc(kind, n, t_end=1.0, params=None, **kw):
    p = {"kind": kind, "params": params or {}, "t_end": t_end, "n": n}
    p.update(kw)
    return {"process": p}

STOCH = {"gaussian_modulus": True}
MBM_WIN = {"j_min": 6, "k_min": 3, "gaussian_modulus": True}
ZERO_WIN = {"j_min": 5, "k_min": 3, "gaussian_modulus": True}
MBM_H = {"a": 0.3, "b": 0.4}
seeds20 = lambda m: {"count": 20, "master": m}

configs = []
def add(name, anchor, body, **kw):
    c = {"name": name, "anchor": anchor}
    c.update(body)
    c.update(kw)
    configs.append(c)

add("chirp-frontier", "chirp |t-t0| sin(|t-t0|^-1): pseudo frontier (s'+1)/2 capped at 1", chirp(),
    probes={"times": [0.5]}, measure="frontier", s_grid=[-0.5, 0, 0.5, 1], expectation=cat("chirp", {"alpha": 1, "beta": 1}), tolerance=0.12)
add("chirp-pointwise", "chirp: pointwise exponent alpha = 1", chirp(),
    probes={"times": [0.5]}, measure="pointwise", expectation=cat("chirp", {"alpha": 1, "beta": 1}), tolerance=0.1)
add("chirp-local", "chirp: local exponent alpha/(1+beta) = 1/2", chirp(),
    probes={"times": [0.5]}, measure="local", expectation=cat("chirp", {"alpha": 1, "beta": 1}), tolerance=0.1)
add("frac-integral-shift", "fractional integral of order 1/2 of the chirp: pointwise alpha + gamma/(1+beta) = 1.25",
    chirp(2**14), transforms=[{"op": "frac_integral", "order": 0.5}],
    probes={"times": [0.5]}, measure="pointwise", window={"detrend": True}, expectation={"value": 1.25}, tolerance=0.15)
add("envelope-shift", "chirp times |t-t0|^(1/2): frontier shifted in s' by 1/2, (s'+3/2)/2 capped at 1",
    chirp(), transforms=[{"op": "envelope", "t0": 0.5, "gamma": 0.5}],
    probes={"times": [0.5]}, measure="frontier", s_grid=[-1, -0.5, 0, 0.5],
    expectation={"chain": {"base": cat("chirp", {"alpha": 1, "beta": 1}, classic=True),
                           "ops": [{"op": "shift", "delta": 0.5}, {"op": "classic_to_pseudo", "p": None}]}}, tolerance=0.12)
add("power-frontier", "|t-t0|^(1/2): pseudo frontier (1/2+s') capped at 1", power(0.5),
    probes={"times": [0.5]}, measure="frontier", s_grid=[-0.25, 0, 0.25, 0.5, 1], expectation=cat("power", {"alpha": 0.5}, "at_zero"), tolerance=0.12)
add("power-pointwise", "|t-t0|^(1/2): pointwise exponent 1/2", power(0.5),
    probes={"times": [0.5]}, measure="pointwise", expectation={"value": 0.5}, tolerance=0.05)
add("cantor-frontier", "Cantor-type f_alpha, alpha = 1/2, at 0: ((s'+1)/2) capped at 1", cantor(),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-1, 0, 1], expectation=cat("cantor_f_alpha", {"alpha": 0.5}, "at_zero"), tolerance=0.12)
add("cantor-local", "Cantor-type f_alpha, alpha = 1/2: local exponent 1/(1 - log2 alpha) = 1/2", cantor(),
    probes={"times": [0.0]}, measure="local", expectation=cat("cantor_f_alpha", {"alpha": 0.5}, "at_zero"), tolerance=0.1)
add("classic-pseudo-power", "classic to pseudo conversion: |t-t0|^(3/2) has classic 3/2+s', pseudo (3/2+s') capped at 1",
    power(1.5), probes={"times": [0.5]}, measure="frontier", s_grid=[-1, -0.75, -0.5],
    expectation={"chain": {"base": cat("power", {"alpha": 1.5}, "at_zero", classic=True), "ops": [{"op": "classic_to_pseudo", "p": None}]}}, tolerance=0.12)
add("classic-pseudo-t2", "classic to pseudo conversion: (t-t0)^2 has infinite classic frontier, pseudo (2+s') capped at 1",
    {"detfun": {"kind": "polynomial", "params": {"c2": 1, "t0": 0.5}}, "grid": {"t_start": 0, "t_end": 1, "n": 2**16 + 1}},
    probes={"times": [0.5]}, measure="frontier", s_grid=[-1.75, -1.5, -1.25, -1],
    expectation={"chain": {"base": cat("power", {"alpha": 2}, "at_zero", classic=True), "ops": [{"op": "classic_to_pseudo", "p": 2}]}}, tolerance=0.12)
add("primitive-rule", "primitive of |t-t0|^(1/2), which vanishes at t0: (Sigma_f(s')+1) capped at 1",
    power(0.5), transforms=[{"op": "primitive"}], probes={"times": [0.5]}, measure="frontier", s_grid=[-1.25, -1, -0.75],
    expectation={"chain": {"base": cat("power", {"alpha": 0.5}, "at_zero"), "ops": [{"op": "add_const", "gamma": 1}, {"op": "cap", "c": 1}]}}, tolerance=0.12)

add("bm-frontier", "Brownian motion: (1/2+s') capped at 1/2", proc("bm", 2**16), seeds=seeds20(1),
    probes={"times": [0.5]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH, expectation=cat("brownian"), tolerance=0.12)
add("bm-local", "Brownian motion: local exponent 1/2", proc("bm", 2**16), seeds=seeds20(2),
    probes={"times": [0.5]}, measure="local", window=STOCH, expectation=cat("brownian"), tolerance=0.1)
add("bm-pointwise", "Brownian motion: pointwise exponent 1/2", proc("bm", 2**16), seeds=seeds20(3),
    probes={"times": [0.5]}, measure="pointwise", window=STOCH, expectation=cat("brownian"), tolerance=0.1)
add("square-bm-at0", "B_t^2 at 0: (1+s') capped at 1/2", proc("bm", 2**16), transforms=[{"op": "square"}], seeds=seeds20(4),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-0.75, -0.5, 0, 0.5], window=STOCH, expectation=cat("square_brownian_at0", {}, "at_zero"), tolerance=0.15)
add("ou-frontier", "Ornstein-Uhlenbeck: (1/2+s') capped at 1/2",
    proc("ou", 2**16, params={"theta": 2, "mu": 0, "sigma": 1, "x0": 0}), seeds=seeds20(5),
    probes={"times": [0.5]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH, expectation=cat("ou"), tolerance=0.12)
add("semimartingale-min", "Brownian motion plus the monotone drift t^(1/5), at 0: minimum of the two frontiers",
    proc("bm", 2**16), transforms=[{"op": "add_detfun", "spec": {"kind": "power", "params": {"alpha": 0.2, "t0": 0}}}],
    seeds=seeds20(6), probes={"times": [0.0]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH,
    expectation={"min": [cat("brownian"), cat("power", {"alpha": 0.2}, "at_zero")]}, tolerance=0.15)

mbm = lambda n, **kw: proc("mbm", n, hurst=MBM_H, **kw)
add("mbm-frontier", "mBm with H(t) = 0.3 + 0.4t: (s'+H(t)) capped at H(t)", mbm(2**14), seeds=seeds20(7),
    probes={"times": [0.25, 0.5, 0.75], "expectations": [cat("mbm", {"H": 0.4}), cat("mbm", {"H": 0.5}), cat("mbm", {"H": 0.6})]},
    measure="frontier", s_grid=[-0.25, 0, 0.25], window=MBM_WIN, expectation=cat("mbm", {"H": 0.5}), tolerance=0.12)
add("mbm-local", "mBm with H(t) = 0.3 + 0.4t: local exponent H(t)", mbm(2**14), seeds=seeds20(8),
    probes={"times": [0.25, 0.5, 0.75], "expectations": [{"value": 0.4}, {"value": 0.5}, {"value": 0.6}]},
    measure="local", window=MBM_WIN, expectation={"value": 0.5}, tolerance=0.12)
add("mbm-osc-lower", "mBm with H(t) = 0.3 + 0.4t: ball oscillation at least rho^(H(t)+0.2)", mbm(2**17), seeds=seeds20(9),
    measure="oscillation_lower", oscillation={"eps": 0.2, "r_min": 4, "r_max": 12}, expectation={"fraction": 0.9}, tolerance=0.1)
add("bm-osc-lower", "H = 1/2 (Brownian motion): ball oscillation at least rho^(1/2+0.15)",
    proc("mbm", 2**16, hurst={"a": 0.5, "b": 0}), seeds=seeds20(10),
    measure="oscillation_lower", oscillation={"eps": 0.15, "r_min": 4, "r_max": 12}, expectation={"fraction": 0.9}, tolerance=0.1)

cantor_g = {"kind": "cantor_f_alpha", "params": {"alpha": 0.5}, "depth": 40}
add("mg-vq-cantor", "B(f_alpha) with alpha = 1/2 at 0: mg transform of the time-change frontier, ((s'+1/2)/2) capped at 1/2",
    proc("time_changed_bm", 2**16, time_change=cantor_g), seeds=seeds20(11),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH,
    expectation={"chain": {"base": cat("cantor_f_alpha", {"alpha": 0.5}, "at_zero"), "ops": [{"op": "mg_transform"}]}}, tolerance=0.15)
add("time-changed-bm", "B(f_alpha) with alpha = 1/2 at 0: catalog value (s'+1/2)/(1 - log2 alpha) capped at 1/2",
    proc("time_changed_bm", 2**16, time_change=cantor_g), seeds=seeds20(12),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH,
    expectation=cat("time_changed_bm", {"alpha": 0.5}), tolerance=0.15)
add("compose-lower", "B(f_alpha) with alpha = 1/4 at 0: above the composition lower bound",
    proc("time_changed_bm", 2**16, time_change={"kind": "cantor_f_alpha", "params": {"alpha": 0.25}, "depth": 40}), seeds=seeds20(13),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-0.25, 0, 0.5], window=STOCH,
    expectation={"compose_lower": {"f": cat("cantor_f_alpha", {"alpha": 0.25}, "at_zero"), "g": cat("brownian")}}, tolerance=0.12)
add("time-changed-mbm", "mBm (H(t) = 0.3 + 0.4t) run on the clock f_alpha, alpha = 1/2, at 0: H(0) Sigma_f(s'/H(0))",
    proc("mbm", 2**13, hurst=MBM_H, time_change=cantor_g), seeds=seeds20(14),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-0.2, 0, 0.3], window=STOCH,
    expectation={"chain": {"base": cat("cantor_f_alpha", {"alpha": 0.5}, "at_zero"), "ops": [{"op": "scale", "c": 0.3, "d": 0.3}]}}, tolerance=0.15)

bm_int = proc("ito_integral", 2**16, driver={"kind": "bm", "params": {"x0": 0.0}, "n": 2**16})
add("ito-bm-zero", "integral of B against dB at zeros of B: pointwise 1/2 + 1/2", bm_int, seeds=seeds20(15),
    probes={"zero_set": "zeros"}, measure="pointwise", window=ZERO_WIN, expectation={"half_plus_hurst": True}, tolerance=0.2)
add("ito-bm-nonzero", "integral of B against dB away from zeros of B: (1/2+s') capped at 1/2", bm_int, seeds=seeds20(16),
    probes={"zero_set": "nonzeros"}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=ZERO_WIN,
    expectation=cat("stoch_int_bm", {}, "nonzero"), tolerance=0.15)
mbm_int = proc("ito_integral", 2**14, driver={"kind": "mbm", "hurst": MBM_H, "n": 2**14})
add("mbm-int-zero", "integral of mBm against dB at zeros of the integrand: pointwise 1/2 + H(t)", mbm_int, seeds=seeds20(17),
    probes={"zero_set": "zeros"}, measure="pointwise", window=ZERO_WIN, expectation={"half_plus_hurst": True}, tolerance=0.2)
add("mbm-int-nonzero", "integral of mBm against dB away from zeros of the integrand: pointwise 1/2", mbm_int, seeds=seeds20(18),
    probes={"zero_set": "nonzeros"}, measure="pointwise", window=ZERO_WIN, expectation={"value": 0.5}, tolerance=0.15)

besq = lambda delta, x, t_end=4.0: proc("besq", 2**16, t_end=t_end, params={"delta": delta, "x": x})
add("besq-zero", "BESQ delta = 1/2 at its zeros: pointwise exponent 1", besq(0.5, 0.1), seeds=seeds20(19),
    probes={"zero_set": "zeros"}, measure="pointwise", window=ZERO_WIN, expectation=cat("besq", {"delta": 0.5}, "at_zero"), tolerance=0.2)
add("besq-zero-frontier", "BESQ delta = 1/2 at its zeros: (1+s') capped at 1/2", besq(0.5, 0.1), seeds=seeds20(19),
    probes={"zero_set": "zeros"}, measure="frontier", s_grid=[-0.75, -0.5, 0], window=ZERO_WIN,
    expectation=cat("besq", {"delta": 0.5}, "at_zero"), tolerance=0.15)
add("besq-zero-local", "BESQ delta = 1/2 at its zeros: local exponent 1/2", besq(0.5, 0.1), seeds=seeds20(19),
    probes={"zero_set": "zeros"}, measure="local", window=ZERO_WIN, expectation=cat("besq", {"delta": 0.5}, "at_zero"), tolerance=0.15)
add("besq-nonzero", "BESQ delta = 1/2 away from zero: pointwise exponent 1/2", besq(0.5, 0.1), seeds=seeds20(20),
    probes={"zero_set": "nonzeros"}, measure="pointwise", window=ZERO_WIN, expectation=cat("besq", {"delta": 0.5}, "nonzero"), tolerance=0.15)
add("besq-recurrent", "BESQ delta = 1/2 over [0,4]: zero is recurrent, zero set non-empty", besq(0.5, 0.1), seeds=seeds20(21),
    measure="zero_presence", window=ZERO_WIN, expect_zeros=True, expectation={"fraction": 0.9}, tolerance=0.1)
add("besq-transient", "BESQ delta = 2 from 1: zero is polar, zero set empty", besq(2.0, 1.0, 1.0), seeds=seeds20(22),
    measure="zero_presence", window=ZERO_WIN, expect_zeros=False, expectation={"fraction": 0.9}, tolerance=0.1)

heston = proc("heston", 2**16, t_end=4.0, params={"mu": 0.05, "kappa": 1.0, "theta": 0.04, "xi": 0.5, "rho": -0.5, "v0": 0.04, "s0": 1.0})
add("heston-vol-zero", "Heston volatility at its zeros: pointwise exponent 1", dict(heston, component="vol"), seeds=seeds20(23),
    probes={"zero_set": "zeros"}, measure="pointwise", window=ZERO_WIN, expectation=cat("heston_vol", {}, "at_zero"), tolerance=0.2)
add("heston-vol-nonzero", "Heston volatility away from zero: pointwise exponent 1/2", dict(heston, component="vol"), seeds=seeds20(24),
    probes={"zero_set": "nonzeros"}, measure="pointwise", window=ZERO_WIN, expectation=cat("heston_vol", {}, "nonzero"), tolerance=0.15)
add("heston-price-nonzero", "Heston price where the volatility is positive: (1/2+s') capped at 1/2", heston, seeds=seeds20(25),
    probes={"zero_set": "nonzeros"}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=ZERO_WIN,
    expectation=cat("heston_price", {}, "nonzero"), tolerance=0.15)

sde = lambda p, x0=0.0: proc("generic_sde", 2**16, params=dict({"x0": x0, "a_scale": 1, "a_root": 0, "a_exp": 0, "b_const": 0, "b_scale": 0, "b_root": 0, "b_exp": 0}, **p))
add("sde-a-nonzero", "diffusion with a(X_t) != 0: (1/2+s') capped at 1/2",
    sde({"a_scale": 1, "a_root": -10, "a_exp": 0.5, "b_const": 0.5}), seeds=seeds20(26),
    probes={"times": [0.5]}, measure="frontier", s_grid=[-0.5, 0, 0.5], window=STOCH,
    expectation={"sde_bounds": {"alpha_a": 0.5, "alpha_b": 0, "case": "a_nonzero"}}, tolerance=0.12)
add("sde-a-zero-b-nonzero", "a(x) = |x|^(1/4), b = 1, started at the zero of a: between the two bounds",
    sde({"a_exp": 0.25, "b_const": 1}), seeds=seeds20(27),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-1, -0.75, -0.5, 0], window=STOCH,
    expectation={"sde_bounds": {"alpha_a": 0.25, "alpha_b": 0, "case": "a_zero_b_nonzero"}}, tolerance=0.15)
add("sde-a-zero-b-nonzero-equal", "a(x) = |x|, b = 1, started at the zero of a: (1+s') capped at 1/2",
    sde({"a_exp": 1, "b_const": 1}), seeds=seeds20(28),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-1, -0.75, -0.5, 0], window=STOCH,
    expectation={"sde_bounds": {"alpha_a": 1, "alpha_b": 0, "case": "a_zero_b_nonzero"}}, tolerance=0.15)
add("sde-a-zero-b-zero", "a(x) = |x|^(3/4), b(x) = |x|^(1/2), leaving the common zero: above the lower bound, below 1/2",
    sde({"a_exp": 0.75, "b_scale": 1, "b_exp": 0.5}, 1e-12), seeds=seeds20(29),
    probes={"times": [0.0]}, measure="frontier", s_grid=[-1.75, -1.5, -1, 0], window=STOCH,
    expectation={"sde_bounds": {"alpha_a": 0.75, "alpha_b": 0.5, "case": "a_zero_b_zero"}}, tolerance=0.15)
add("sde-a-locally-zero", "a = 0, b(x) = |x|^(1/2), leaving the zero of b: above (2+s') capped at 1",
    sde({"a_scale": 0, "b_scale": 1, "b_exp": 0.5}, 1e-12), seeds={"count": 1, "master": 30},
    probes={"times": [0.0]}, measure="frontier", s_grid=[-1.5, -1, -0.5, 0],
    expectation={"sde_bounds": {"alpha_a": 0, "alpha_b": 0.5, "case": "a_locally_zero"}}, tolerance=0.12)

for c in configs:
    with open(os.path.join(out, c["name"] + ".json"), "w") as f:
        json.dump(c, f, indent=2)
        f.write("\n")
print(len(configs))
