"""
Four rating engines on one simulated league
===========================================

A simulated league has known team strengths, so we can check how well each
rating engine recovers them. Every engine reads the matches in date order
and updates after each one.
"""

from scipy.stats import spearmanr

from pitchrater.ratings import BerrarConfig, make_engine, replay
from pitchrater.simulate import SimLeague, gen_league

# Twenty teams with strengths spread evenly on a log scale, four seasons.
sim = SimLeague.log_spaced(20, seasons=4, seed=7)
dataset, truth = gen_league(sim)
print("%d matches, %d teams" % (len(dataset), len(truth)))

teams = sorted(truth)
true_strength = [truth[t] for t in teams]

# Berrar ratings run with defence treated as a strength, which keeps long
# replays stable (see BerrarConfig).
configs = {"berrar": BerrarConfig(defence_is_strength=True)}

for name in ("elo", "pi", "berrar", "gap"):
    engine = replay(make_engine(name, configs.get(name)), dataset.matches)
    rho = spearmanr(true_strength, [engine.strength(t) for t in teams]).statistic
    best = max(teams, key=engine.strength)
    print("%-7s Spearman %.3f   top-rated %s (true strength %.2f)" % (name, rho, best, truth[best]))

# Ratings are more than a single number. pi keeps separate home and away
# ratings, GAP keeps attack and defence at each ground.
pi = replay(make_engine("pi"), dataset.matches)
gap = replay(make_engine("gap"), dataset.matches)
strongest = teams[-1]
print("\npi components for %s:" % strongest, {k: round(v, 3) for k, v in pi.components(strongest).items()})
print("GAP components for %s:" % strongest, {k: round(v, 3) for k, v in gap.components(strongest).items()})
