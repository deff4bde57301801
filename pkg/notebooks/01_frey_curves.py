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
# # Frey hyperelliptic curves for a^p + b^p = c^r
#
# Build the two curves attached to a triple, compare the closed-form
# discriminant with the one computed from the model, and look at the
# traces of Frobenius, which come in Galois-conjugate pairs over Z[phi].

# %%
from freyhyper.frey import MINUS, PLUS, FreyTriple, frey_discriminant, frey_discriminant_symbolic, frey_model
from freyhyper.frobenius import trace_at_prime
from freyhyper.hyperelliptic import discriminant
from freyhyper.numfield import factor_rational_prime

t = FreyTriple(1, -1, 0, 7)          # the trivial triple, c = 0
for sign in (MINUS, PLUS):
    cur = frey_model(t, sign)
    print(sign, cur.model)
    print("  Delta(P) =", frey_discriminant(t, sign), " Delta_E =", discriminant(cur.model))

# %% [markdown]
# The discriminant has the same shape for every solution of a + b = c^r
# with A = a^p, B = b^p:

# %%
for r in (3, 5, 7, 11):
    print(r, frey_discriminant_symbolic(r, MINUS), "|", frey_discriminant_symbolic(r, PLUS))

# %% [markdown]
# Traces at a few small primes of K = Q(sqrt5).  Primes above 5 divide the
# discriminant and are skipped.

# %%
cur = frey_model(t, MINUS)
for q in (3, 7, 11, 19, 29, 31):
    for P in factor_rational_prime(q):
        print(f"{P.label:>6}  {trace_at_prime(cur, P)}")
