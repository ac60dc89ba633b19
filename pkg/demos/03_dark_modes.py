"""
Dark modes and suppressed cooling
=================================

Normal modes of the mechanical block that do not couple to the cavity keep
their thermal occupation.  They appear when a coupling cancels (equal tweezer
powers) or when two normal modes become degenerate.  Run with
``python3 demos/03_dark_modes.py``.
"""
# %%
import numpy as np

from levicool import build_arrowhead, build_couplings, cool, detect_dark_modes, linearize, reference_parameters


def analyse(P2):
    cp = build_couplings(reference_parameters(P_tw2=P2))
    sysm = linearize(cp.g)
    rep = detect_dark_modes(build_arrowhead(cp.model, cp.g, sysm.steady_state))
    return cp, rep


# %% [markdown]
# Equal powers: the particles are identical, and three antisymmetric
# combinations decouple exactly.

# %%
cp, rep = analyse(0.8)
w = cp.model.omega_1x
print("P2 = 0.8 W")
print("  normal frequencies / w1x:", np.round(rep.normal_freqs / w, 4))
print("  |C_AB| / w1x:            ", np.array2string(np.abs(rep.C_AB) / w, precision=2))
print("  dark:", rep.dark_count, sorted(rep.mechanisms.items()))
print("  n:", np.array2string(cool(reference_parameters(P_tw2=0.8)).n_bar, precision=3))

# %% [markdown]
# Power scan at theta = pi/8.  Away from 0.8 W the modes cool, except near
# two powers where a pair of x/y normal modes becomes nearly degenerate and
# one combination goes dark.  The z modes do not take part in those two
# degeneracies; they only heat up next to 0.8 W.

# %%
print("\nP2 (W)   dark   max n(x, y)   max n(z)")
for P2 in np.round(np.linspace(0.60, 1.00, 41), 3):
    _, rep = analyse(P2)
    n = cool(reference_parameters(P_tw2=P2)).n_bar
    flag = " <" if rep.dark_count else ""
    print(f"{P2:6.3f}   {rep.dark_count:3d}   {n[:4].max():11.3g}   {n[4:].max():8.3g}{flag}")

# %% [markdown]
# Close-up of the first degeneracy.

# %%
for P2 in (0.675, 0.6847, 0.688, 0.695):
    cp, rep = analyse(P2)
    pair = [np.round(rep.normal_freqs[c] / cp.model.omega_1x, 4).tolist() for c in rep.clusters]
    print(f"P2 = {P2}: dark {rep.dark_count}, degenerate clusters {pair}")
