import sys
import cProfile
import pstats

from spherical_catenoid.__main__ import main

# usage: python scripts/run_cprofile.py [spectrum|index]
target = sys.argv[1] if len(sys.argv) > 1 else "spectrum"

if target == "index":
    args = ["-q", "index", "--a", "1", "--a", "5", "--k-max", "3"]
else:
    args = ["-q", "spectrum", "--a", "5", "--k", "2", "--mu-max", "20"]

filename = 'profile_stats_%s.stats' % target
cProfile.run('main(args)', filename)

stats = pstats.Stats(filename)
# stats.strip_dirs()

stats.sort_stats('tottime')
# stats.sort_stats('cumtime')
stats.print_stats(30)

# stats.print_callers("'ode_trajectory'")
# stats.print_callers("'integrate'")
