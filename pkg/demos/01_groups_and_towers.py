# %% [markdown]
# Finite groups and towers
#
# A tower is a chain G_1 <- G_2 <- ... <- G_d of finite groups joined by
# surjective bonding maps.  A coherent element picks one component per level,
# compatible under the bonds.

# %%
from profinite import (coherent_element, enumerate_automorphisms, frobenius_element,
                       make_group, make_tower, project, validate_tower)

# %% groups from the one-line spec grammar
for spec in ["cyclic 8", "units 9", "product cyclic 2 cyclic 2", "gl2 2^2"]:
    G = make_group(spec)
    print(f"{spec:28s} order={G.order:4d} abelian={G.is_abelian}")

# %% automorphism counts by generator-image search
for spec in ["cyclic 8", "product cyclic 2 cyclic 2", "units 9"]:
    print(spec, "|Aut| =", len(enumerate_automorphisms(make_group(spec))))

# %% the standard towers
for kind, depth, p in [("binary", 4, None), ("cyclotomic", 3, 3), ("f2ab", 3, None),
                       ("aut_f2ab", 2, None)]:
    T = make_tower(kind, depth, p)
    ok = all(c.ok and c.strict_refinement for c in validate_tower(T))
    print(T.spec, T.orders(), "valid" if ok else "INVALID")

# %% coherent elements and projections in (Z/27)^x
T = make_tower("cyclotomic", 3, 3)
x = coherent_element(T, ["2", "5", "23"])
print(x, "->", project(T, x.top, 1).label)

# %% Frobenius at q = 7 in (Z/27)^x, reduced to each level
for n in (1, 2, 3):
    print(n, frobenius_element(3, n, 7).label)
