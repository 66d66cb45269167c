from datetime import date, timedelta

import pytest

from pitchrater.data import Dataset, MatchRecord


def match(home="a", away="b", hg=1, ag=0, day=0, season="s1", league="L", odds=None,
          stats=None, index=0):
    return MatchRecord.from_score(season, league, date(2020, 1, 1) + timedelta(days=day),
                                  home, away, hg, ag, odds=odds, stats=stats, source_index=index)


@pytest.fixture
def make_match():
    return match


def dataset_of(*matches):
    return Dataset(tuple(matches), ordering_flag=True)


# One line per acceptance criterion, filled in by test_acceptance.py and
# echoed at the end of the run so it shows up without ``-s``.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
