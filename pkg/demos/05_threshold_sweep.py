"""
Reading a judged evaluation sheet
=================================

Sampled pairs (lowest vs highest scored synonym) are judged by hand as
EASIER, EQUAL or HARDER. Sweeping a minimum score gap shows how precision
changes when only clearly separated pairs are kept.
"""
import io
import random

from medlay.evaluation import read_judged_sheet, render_pairs_sweep, threshold_sweep, write_judged_sheet

# a made-up sheet: wider gaps are judged EASIER more often
rng = random.Random(42)
rows = []
for _ in range(300):
    gap = rng.uniform(0, 80)
    p_easier = 0.35 + gap / 200
    r = rng.random()
    rows.append((round(gap, 2), "EASIER" if r < p_easier else "EQUAL" if r < 0.9 else "HARDER"))

buf = io.StringIO()
write_judged_sheet(rows, buf)
judged = read_judged_sheet(buf.getvalue().splitlines(True))
print(render_pairs_sweep(threshold_sweep(judged, range(0, 55, 5))))
