"""Count components of B(N) - B(n) for a few Cayley graphs, then look at the
two halves of a cover truncation of the trefoil amalgam."""
from splitgroups import build_cover_truncation, cayley_ball, complement_components, parse_presentation, split_complex
from splitgroups.ends import probe_series
from splitgroups.formats import parse_splitting

for name, text, N in [
    ("Z", "gens: a", 10),
    ("Z^2", "gens: a b\nrel: a b a^-1 b^-1", 10),
    ("F(a,b)", "gens: a b", 6),
    ("Klein bottle", "gens: a b\nrel: a b a b^-1", 8),
]:
    ball = cayley_ball(parse_presentation(text), N)
    counts = [complement_components(ball, n).count for n in range(N - 2)]
    print(f"{name:<13} |B({N})| = {len(ball):<5} components for n = 0..{N - 3}: {counts}")

trefoil = parse_splitting("[amalgam]\nA.gens: x\nB.gens: y\nH.inA: x^2\nH.inB: y^3\n")
tr = build_cover_truncation(trefoil, 6)
zplus, zminus = split_complex(tr)
print(f"\ntrefoil truncation: {len(tr.ball)} vertices, Gamma_0 has {len(tr.gamma0)}")
print(f"Zplus {len(zplus)}, Zminus {len(zminus)}, intersection equals Gamma_0: {zplus & zminus == tr.gamma0}")
reports, _ = probe_series(tr, [1, 2, 3])
for r in reports:
    print(f"cut {r.n}: {len(r.gamma_components)} edge-graph pieces, plus {r.incidence_plus}, minus {r.incidence_minus}")
