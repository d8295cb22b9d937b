"""Walk the one-relator hierarchy of a few groups and print each step."""
from splitgroups import check_step, format_word, hierarchy, parse_presentation

GROUPS = {
    "Klein bottle": "gens: a b\nrel: a b a b^-1",
    "BS(1,2)": "gens: a t\nrel: t a t^-1 a^-2",
    "trefoil": "gens: x y\nrel: x^2 y^-3",
    "Baumslag-Gersten": "gens: a b\nrel: b^-1 a^-1 b a b^-1 a b a^-2",
}

for name, text in GROUPS.items():
    h = hierarchy(parse_presentation(text))
    print(f"{name}:")
    for step in h.steps:
        ok = all(v is not False for v in check_step(step, max_relator_length=12).values())
        print(f"  {step.kind.name:<13} stable {step.stable}  base relator {format_word(step.base.relators[0])}"
              f"  checks {'ok' if ok else 'FAILED'}")
    print(f"  base group: {h.base_classification if h.complete else h.reason}")
