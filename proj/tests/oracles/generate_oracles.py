#!/usr/bin/env python3
# Regenerates oracle_values.hpp from mpmath at 50 digits.
# usage: python3 generate_oracles.py > oracle_values.hpp

import mpmath as mp

mp.mp.dps = 50


def g(x):
    return mp.nstr(x, 20, min_fixed=-mp.inf, max_fixed=mp.inf) if False else mp.nstr(x, 20)


out = []


def emit(name, value):
    out.append(f"inline constexpr double {name} = {mp.nstr(mp.mpf(value), 20)};")


def emit_list(name, values):
    body = ", ".join(mp.nstr(mp.mpf(v), 20) for v in values)
    out.append(f"inline constexpr std::array<double, {len(values)}> {name} = {{{body}}};")


# specfun
lg_x = [0.01, 0.5, 1.5, 2.5, 3.7, 9.99, 10.2, 25.5, 100.0, 1e5]
emit_list("log_gamma_x", lg_x)
emit_list("log_gamma_v", [mp.loggamma(x) for x in lg_x])
dg_x = [0.5, 1.0, 2.0, 7.3, 0.01, 40.0]
emit_list("digamma_x", dg_x)
emit_list("digamma_v", [mp.digamma(x) for x in dg_x])
sg_x = [-0.5, -1.5, -2.5, -3.7, -10.2]
emit_list("signed_gamma_x", sg_x)
emit_list("signed_gamma_v", [mp.gamma(x) for x in sg_x])
hyp = [(1, 1, 2, 0.5), (0.5, 1.5, 2.5, 0.9), (1.3, 2.2, 3.1, 0.75), (2.0, 0.5, 1.7, 0.95),
       (-3, 2.5, 1.5, 0.8), (0.25, 0.75, 1.5, 0.3), (1.5, 2.0, 2.0, 0.999)]
emit_list("hyp_a", [h[0] for h in hyp])
emit_list("hyp_b", [h[1] for h in hyp])
emit_list("hyp_c", [h[2] for h in hyp])
emit_list("hyp_z", [h[3] for h in hyp])
emit_list("hyp_v", [mp.hyp2f1(*h) for h in hyp])

# Malmsten: log Gamma(1 + s)
ms = [-0.5, 0.5, 1, 2, 5]
emit_list("malmsten_s", ms)
emit_list("malmsten_v", [mp.loggamma(1 + s) for s in ms])


# e^{-y} - 1 + y loses every digit at the tanh-sinh nodes next to 0.
def em1_lin(y):
    if y < mp.mpf("1e-8"):
        return y * y / 2 - y ** 3 / 6 + y ** 4 / 24
    return mp.exp(-y) - 1 + y


emit("euler_gamma_integral", mp.quad(lambda y: em1_lin(y) / (y * mp.expm1(y)), [0, 1, 10, mp.inf]))

# Densities of L_t by Mellin inversion on Re s = 0.
def lt_density(t, x):
    f = lambda u: mp.re(mp.exp(t * mp.loggamma(1 + 1j * u)) * mp.power(x, -1 - 1j * u))
    return mp.quad(f, mp.linspace(0, 60 / t, 40) + [mp.inf]) / mp.pi


emit("f2_at_1", 2 * mp.besselk(0, 2))
dens = [(0.5, 0.5), (0.5, 1.0), (0.5, 3.0), (3.0, 2.0), (3.0, 20.0), (1.5, 0.7)]
emit_list("lt_t", [d[0] for d in dens])
emit_list("lt_x", [d[1] for d in dens])
emit_list("lt_v", [lt_density(*d) for d in dens])

# beta rho: b e^{-a x/s} 2F1(1+s, 1-b; 2; 1 - e^{-x/s})
def beta_rho(a, b, s, x):
    w = mp.exp(-x / s)
    return b * mp.exp(-a * x / s) * mp.hyp2f1(1 + s, 1 - b, 2, 1 - w)


rho = [(1, 2, 0.5, 0.5), (2, 3, 1, 1), (1.5, 0.5, 0.7, 2.0), (3, 0.3, 0.9, 0.1)]
emit_list("rho_a", [r[0] for r in rho])
emit_list("rho_b", [r[1] for r in rho])
emit_list("rho_s", [r[2] for r in rho])
emit_list("rho_x", [r[3] for r in rho])
emit_list("rho_v", [beta_rho(*r) for r in rho])

# Hilbert 3x3 and the two-atom sequence (1 + 3^n)/2 at t = 0.1
H = mp.matrix([[mp.mpf(1) / (i + j + 1) for j in range(3)] for i in range(3)])
emit("hilbert3_min_eig", min(mp.eigsy(H)[0]))


def scaled_min_eig(mu, size, shift):
    M = mp.matrix(size, size)
    for i in range(size):
        for j in range(size):
            M[i, j] = mu(i + j + shift) / mp.sqrt(mu(2 * i + shift) * mu(2 * j + shift))
    return min(mp.eigsy(M)[0])


two_atom = lambda n: ((1 + mp.mpf(3) ** n) / 2) ** mp.mpf("0.1")
emit_list("two_atom_shift0", [scaled_min_eig(two_atom, k, 0) for k in range(1, 6)])
emit_list("two_atom_shift1", [scaled_min_eig(two_atom, k, 1) for k in range(1, 6)])

# KP16 kernel of [(1,1)] vs [(1,0.5),(1,0.5)] on the default grid
def kp16(x):
    return mp.exp(-x) / (1 - mp.exp(-x)) - 2 * mp.exp(-2 * x) / (1 - mp.exp(-2 * x))


grid = [mp.mpf("1e-3") * mp.power(mp.mpf("5e4"), mp.mpf(i) / 240) for i in range(241)]
emit("kp16_half_kernel_min", min(kp16(x) for x in grid))

# remainder Phi for t = 0.5
lams = [0.25, 0.5, 1, 2, 4, 8]
emit_list("remainder_lambda", lams)
emit_list("remainder_half_v", [mp.gamma(0.5 + l) / (mp.sqrt(l) * mp.gamma(l)) for l in lams])

# gamma1(1, 1/2): killing 1/sqrt(pi), products Gamma(1 + n/2)
emit("gamma1_half_killing", 1 / mp.sqrt(mp.pi))
emit_list("gamma_one_plus_half_n", [mp.gamma(1 + mp.mpf(n) / 2) for n in range(1, 11)])

print("#pragma once")
print()
print("// Generated by generate_oracles.py (mpmath, 50 digits). Do not edit.")
print()
print("#include <array>")
print()
print("namespace oracle {")
print()
for line in out:
    print(line)
print()
print("}  // namespace oracle")
