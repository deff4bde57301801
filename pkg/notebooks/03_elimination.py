# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Irreducibility and elimination
#
# Reducible residual representations are ruled out by unit and ray class
# arguments.  Then each newform at the Serre level is compared with the
# Frey traces through the integers T(g, Q).

# %%
from freyhyper.elimination import eliminate, ingest_space, rational_form, synthetic_form
from freyhyper.frey import MINUS, FreyTriple, frey_model
from freyhyper.frobenius import trace_at_prime
from freyhyper.numfield import Q2, Q5, factor_rational_prime
from freyhyper.obstructions import ray_class_order, reducibility_contradictions
from freyhyper.selmer import selmer_group

for case in ("I", "II"):
    print("\n".join(reducibility_contradictions(case).lines()))
for mod in ({}, {Q5: 1}, {Q5: 3}, {Q2: 2}):
    print(ray_class_order(mod, (1, 2)))

# %% [markdown]
# Case I needs forms at levels (1) and q5.  The bundled data states both
# spaces are zero, so nothing survives.

# %%
spaces = [ingest_space("bundled", {}), ingest_space("bundled", {Q5: 1})]
print("\n".join(eliminate("I", [3, 7, 11], [], spaces).lines()))

# %% [markdown]
# Case II needs forms at q2 q5^2 and q2 q5^3, which are not bundled.  Two
# synthetic forms show what the method does: one matching the traces of the
# trivial solution (a CM curve, never eliminated) and one rational form that
# every twist in K({q2}, 2) eliminates.

# %%
cur = frey_model(FreyTriple(1, -1, 0, 7), MINUS)
traces = {P.label: trace_at_prime(cur, P) for q in (3, 7, 11) for P in factor_rational_prime(q)}
cm = synthetic_form("cm", {Q2.label: 1, Q5.label: 3}, traces, cm=True)
print("\n".join(eliminate("II", [3, 7, 11], [cm], chi0s=[1]).lines()))

g = rational_form("toy", {Q2.label: 1, Q5.label: 3}, {"9.1": 2})
rep = eliminate("II", [3], [g])
print("twists:", len(selmer_group([Q2])))
print("\n".join(rep.lines()))
