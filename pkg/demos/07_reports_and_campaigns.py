"""
Verification reports, campaigns, and replay
===========================================

Every suite returns a report carrying its parameters, one record per
checked case, and a verdict.  Reports serialize to stable JSON; in
comparison mode (wall clock stripped) two same-seed runs are byte
identical.  Any case replays bit for bit from its recorded seeds.
"""

import tempfile
from pathlib import Path

from bmolab import (
    bench,
    campaign,
    check_lemma_stopping_form,
    replay_characterization_case,
    check_characterization,
)

# a small run of the stopping-form suite
rep = check_lemma_stopping_form(trials=5)
print("suite  :", rep.suite)
print("verdict:", rep.verdict)
print("cases  :", len(rep.cases))
print("params :", {k: rep.params[k] for k in ("trials", "alphas", "seed")})

# reports write JSON and a flat CSV with one row per case
out = Path(tempfile.mkdtemp())
rep.save(str(out / "report.json"))
rep.write_csv(str(out / "report.csv"))
print("\nCSV head:")
print((out / "report.csv").read_text().splitlines()[0])

# determinism: comparison mode drops the wall clock, nothing else
again = check_lemma_stopping_form(trials=5)
print("byte-identical:", rep.to_json(comparison=True) == again.to_json(comparison=True))

# replay one characterization case from its recorded seeds
crep = check_characterization(trials=3)
case = crep.cases[0]
replayed = replay_characterization_case(case)
print("\nreplayed rhs match:", replayed["rhs"] == case["rhs"])

# campaigns sweep a grid and report one row per cell
camp = campaign(alphas=(0.0, 0.5), depths=(1, 2, 3), trials=5)
print("\ncampaign verdict:", camp.verdict, f"({len(camp.cases)} cases)")

# bench pits fast paths against brute force
print("\n{:>5}  {:<8}  {:<20}  {:>10}".format("depth", "op", "mode", "seconds"))
for row in bench(depths=(1, 2), repeats=1):
    print(
        "{:>5}  {:<8}  {:<20}  {:>10.6f}".format(
            row["depth"], row["op"], row["mode"], row["seconds"]
        )
    )
