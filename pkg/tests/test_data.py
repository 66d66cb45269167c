from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pitchrater.data import (CANONICAL_HEADER, DataError, Dataset, MatchRecord, OddsTriple, Result,
                             ValidationError, canonical_sort, dump_dataset, load_dataset,
                             parse_date, parse_footballdata, parse_oisdb, season_of, validate)

OISDB_HEADER = "Sea,Lge,Date,HT,AT,HS,AS,GD,WDL\n"


def test_oisdb_row_from_schema():
    ds = parse_oisdb(OISDB_HEADER + "00-01,ENG1,2000-08-19,Charlton,Man City,4,0,4,W\n")
    (m,) = ds.matches
    assert m.goal_diff == 4
    assert m.result is Result.HOME_WIN
    assert (m.season, m.league, m.date) == ("00-01", "ENG1", date(2000, 8, 19))
    assert (m.home_team, m.away_team) == ("charlton", "man city")
    assert m.odds is None and m.stats is None


def test_oisdb_draw_and_away_win():
    ds = parse_oisdb(OISDB_HEADER + "s,L,2000-08-19,A,B,1,1,0,D\ns,L,19/08/2000,C,D,0,2,-2,L\n")
    assert [m.result for m in ds] == [Result.DRAW, Result.AWAY_WIN]
    assert ds[1].goal_diff == -2


@pytest.mark.parametrize("row,column", [
    ("s,L,2000-08-19,A,B,2,1,3,W", "GD"),
    ("s,L,2000-08-19,A,B,2,1,1,D", "WDL"),
])
def test_oisdb_inconsistent_row_raises(row, column):
    with pytest.raises(ValidationError) as err:
        parse_oisdb(OISDB_HEADER + row + "\n")
    assert err.value.row == 2 and err.value.column == column


def test_oisdb_lenient_mode_keeps_and_reports():
    ds = parse_oisdb(OISDB_HEADER + "s,L,2000-08-19,A,B,2,1,3,W\n", strict=False)
    assert len(ds.issues) == 1
    report = validate(ds)
    assert report.counts["result_goal_mismatch"] == 1
    assert report.counts["parse_finding"] == 1


@pytest.mark.parametrize("row,column", [
    ("s,L,not-a-date,A,B,2,1,1,W", "Date"),
    ("s,L,2000-08-19,A,B,x,1,1,W", "HS"),
    ("s,L,2000-08-19,A,B,2,1,1,Q", "WDL"),
])
def test_oisdb_malformed_names_row_and_column(row, column):
    with pytest.raises(DataError) as err:
        parse_oisdb(OISDB_HEADER + row + "\n")
    assert (err.value.row, err.value.column) == (2, column)
    assert "row 2" in str(err.value)


def test_oisdb_bad_header():
    with pytest.raises(DataError, match="WDL"):
        parse_oisdb("Sea,Lge,Date,HT,AT,HS,AS,GD\n")


FD_HEADER = "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR,HST,AST,B365H,B365D,B365A,Referee,Weird\n"


def test_footballdata_draw_with_odds_and_stats():
    ds = parse_footballdata(FD_HEADER + "E0,12/08/2022,Arsenal,Chelsea,1,1,D,5,3,2.5,3.2,3.0,X,9\n")
    (m,) = ds.matches
    assert m.result is Result.DRAW
    assert m.odds == OddsTriple(2.5, 3.2, 3.0)
    assert m.stats == {"shots_on_target_home": 5.0, "shots_on_target_away": 3.0}
    assert m.league == "E0" and m.season == "2022-23"
    assert ds.unmapped_columns == ("Weird",)


def test_footballdata_without_odds_columns():
    text = "Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n13/08/22,A,B,2,0,H\n"
    (m,) = parse_footballdata(text).matches
    assert m.odds is None
    assert m.date == date(2022, 8, 13)


def test_footballdata_odds_must_exceed_one():
    with pytest.raises(ValidationError) as err:
        parse_footballdata(FD_HEADER + "E0,12/08/2022,A,B,1,1,D,5,3,0.9,3.2,3.0,X,9\n")
    assert err.value.column == "B365H"


def test_footballdata_missing_mandatory_column():
    with pytest.raises(DataError, match="FTR"):
        parse_footballdata("Date,HomeTeam,AwayTeam,FTHG,FTAG\n")


def test_footballdata_result_mismatch():
    with pytest.raises(ValidationError):
        parse_footballdata("Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n13/08/22,A,B,2,0,A\n")


def test_date_and_season_helpers():
    assert parse_date("2000-08-19") == parse_date("19/08/2000") == parse_date("19/08/00")
    assert season_of(date(2023, 3, 1)) == "2022-23"
    assert season_of(date(2023, 7, 1)) == "2023-24"


def test_canonical_sort_examples(make_match):
    ms = [make_match("a", "b", day=2, index=0), make_match("c", "d", day=1, index=1),
          make_match("e", "f", day=0, index=2)]
    out = canonical_sort(Dataset(tuple(ms)))
    assert [m.date for m in out] == sorted(m.date for m in ms)
    assert out.ordering_flag
    assert canonical_sort(out).matches == out.matches

    same_day = [make_match("x", "y", day=0, index=5), make_match("a", "b", day=0, index=6)]
    assert canonical_sort(Dataset(tuple(same_day))).matches == tuple(same_day)


def test_validate_rules(make_match):
    clean = Dataset((make_match("a", "b"), make_match("c", "d", day=1)))
    assert validate(clean).clean

    dup = Dataset((make_match("a", "b"), make_match("a", "b")))
    assert validate(dup).counts["duplicate_fixture"] == 1

    selfplay = Dataset((make_match("a", "a"),))
    assert validate(selfplay).counts["self_play"] == 1

    gap = Dataset((make_match("a", "b", day=0), make_match("a", "b", day=200)))
    assert validate(gap).counts["date_gap"] == 1


def test_canonical_round_trip(make_match):
    ms = (make_match("a", "b", 2, 1, odds=OddsTriple(1.9, 3.4, 4.1),
                     stats={"corners_home": 7.0, "corners_away": 2.0}),
          make_match("team, with comma", "c", 0, 0, day=1))
    ds = canonical_sort(Dataset(ms))
    text = dump_dataset(ds)
    assert text.splitlines()[0] == CANONICAL_HEADER
    back = load_dataset(text)
    assert back.matches == ds.matches
    assert back.ordering_flag


def test_load_rejects_wrong_header():
    with pytest.raises(DataError):
        load_dataset("something else\n")


records = st.builds(
    lambda d, h, a, hg, ag, lg, i: MatchRecord.from_score(
        "s", lg, date(2020, 1, 1).fromordinal(date(2020, 1, 1).toordinal() + d),
        f"t{h}", f"u{a}", hg, ag, source_index=i),
    st.integers(0, 30), st.integers(0, 5), st.integers(0, 5), st.integers(0, 6),
    st.integers(0, 6), st.sampled_from(["L1", "L2"]), st.integers(0, 10_000),
)


@settings(max_examples=100, deadline=None)
@given(st.lists(records, max_size=30))
def test_sort_is_idempotent_permutation_and_round_trips(ms):
    ds = Dataset(tuple(ms))
    once = canonical_sort(ds)
    assert canonical_sort(once).matches == once.matches
    assert sorted(map(repr, once.matches)) == sorted(map(repr, ms))
    keys = [(m.date, m.league, m.source_index) for m in once]
    assert keys == sorted(keys)
    assert load_dataset(dump_dataset(once)).matches == once.matches
