import datetime as dt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credeq.errors import ValidationError
from credeq.market_data import (
    BondQuote,
    OptionQuote,
    PriceHistory,
    TreasuryCurve,
    filter_options,
    load_bonds_csv,
    load_history_csv,
    load_options_csv,
    load_treasury_csv,
    save_bonds_csv,
    save_history_csv,
    save_options_csv,
    save_treasury_csv,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestTreasuryLoading:
    def test_three_point_curve(self, tmp_path):
        p = write(tmp_path / "t.csv", "maturity_years,yield\n0.0833,0.05\n1,0.051\n5,0.052\n")
        curve = load_treasury_csv(p)
        assert len(curve.points) == 3
        assert curve.points[0] == (0.0833, 0.05)

    def test_ten_point_standard_curve(self, tmp_path):
        # 1m, 3m, 6m, 1y, 2y, 3y, 5y, 7y, 10y, 20y
        mats = [1 / 12, 0.25, 0.5, 1, 2, 3, 5, 7, 10, 20]
        body = "\n".join(f"{m},{0.04 + 0.001 * i}" for i, m in enumerate(mats))
        p = write(tmp_path / "t.csv", "maturity_years,yield\n" + body + "\n")
        assert len(load_treasury_csv(p).points) == 10

    def test_duplicate_maturity_rejected(self, tmp_path):
        p = write(tmp_path / "t.csv", "maturity_years,yield\n1,0.05\n1,0.051\n2,0.052\n")
        with pytest.raises(ValidationError):
            load_treasury_csv(p)

    def test_malformed_row_names_line(self, tmp_path):
        p = write(tmp_path / "t.csv", "maturity_years,yield\n1,0.05\nbogus,0.05\n2,0.05\n")
        with pytest.raises(ValidationError, match=":3"):
            load_treasury_csv(p)

    def test_wrong_header(self, tmp_path):
        p = write(tmp_path / "t.csv", "tenor,rate\n1,0.05\n")
        with pytest.raises(ValidationError, match="header"):
            load_treasury_csv(p)

    def test_too_few_points(self, tmp_path):
        p = write(tmp_path / "t.csv", "maturity_years,yield\n1,0.05\n2,0.05\n")
        with pytest.raises(ValidationError):
            load_treasury_csv(p)


class TestRoundTrips:
    @given(
        pts=st.lists(
            st.tuples(
                st.floats(0.01, 30, allow_nan=False),
                st.floats(-0.02, 0.2, allow_nan=False),
            ),
            min_size=3,
            max_size=12,
            unique_by=lambda t: t[0],
        )
    )
    @settings(max_examples=25, deadline=None)
    def test_treasury_round_trip(self, tmp_path_factory, pts):
        pts = sorted(pts)
        curve = TreasuryCurve(points=tuple(pts))
        path = tmp_path_factory.mktemp("rt") / "c.csv"
        save_treasury_csv(path, curve)
        assert load_treasury_csv(path).points == curve.points

    def test_bond_round_trip(self, tmp_path):
        quotes = [BondQuote(0.60278, 0.97123456789), BondQuote(9.5194, 0.7133)]
        path = tmp_path / "b.csv"
        save_bonds_csv(path, quotes)
        assert load_bonds_csv(path) == quotes

    def test_option_round_trip(self, tmp_path):
        quotes = [
            OptionQuote(0.5, 7.5, "call", 1.2345, 10),
            OptionQuote(1.0, 8.0, "put", 0.9876, 0),
        ]
        path = tmp_path / "o.csv"
        save_options_csv(path, quotes)
        assert load_options_csv(path) == quotes

    def test_history_round_trip(self, tmp_path):
        hist = PriceHistory(
            points=(
                (dt.date(2006, 9, 18), 8.04),
                (dt.date(2006, 9, 19), 8.11),
                (dt.date(2006, 9, 20), 7.98),
            )
        )
        path = tmp_path / "h.csv"
        save_history_csv(path, hist)
        assert load_history_csv(path).points == hist.points

    def test_cds_round_trip(self, tmp_path):
        from credeq.market_data import CdsQuote, load_cds_csv, save_cds_csv

        quotes = [
            CdsQuote(dt.date(2006, 9, 18), 3.0, 195.25),
            CdsQuote(dt.date(2006, 9, 18), 5.0, 247.5),
        ]
        path = tmp_path / "cds.csv"
        save_cds_csv(path, quotes)
        assert load_cds_csv(path) == quotes


class TestQuoteValidation:
    def test_bond_price_bounds(self):
        with pytest.raises(ValidationError):
            BondQuote(maturity=1.0, price=0.0)
        with pytest.raises(ValidationError):
            BondQuote(maturity=1.0, price=1.6)
        BondQuote(maturity=1.0, price=1.4)  # premium bonds allowed

    def test_option_kind_checked(self):
        with pytest.raises(ValidationError):
            OptionQuote(1.0, 8.0, "straddle", 1.0, 1)

    def test_call_above_spot_flagged(self):
        q = OptionQuote(1.0, 8.0, "call", 9.5, 1)
        with pytest.raises(ValidationError, match="spot"):
            q.check_against_spot(9.0)

    def test_history_dates_increase(self):
        with pytest.raises(ValidationError):
            PriceHistory(points=((dt.date(2006, 1, 3), 8.0), (dt.date(2006, 1, 3), 8.1)))


class TestFilterOptions:
    def quotes(self):
        return [
            OptionQuote(8 / 365, 8.0, "call", 0.2, 50),
            OptionQuote(9 / 365, 8.0, "call", 0.2, 50),
            OptionQuote(0.5, 8.0, "call", 0.9, 0),
            OptionQuote(0.5, 8.0, "put", 0.7, 3),
            OptionQuote(2.0, 9.0, "put", 1.7, 120),
        ]

    def test_zero_volume_excluded(self):
        kept = filter_options(self.quotes(), min_maturity=0.0, min_volume=0)
        assert all(q.volume > 0 for q in kept)

    def test_short_maturity_excluded(self):
        kept = filter_options(self.quotes(), min_maturity=9 / 365, min_volume=0)
        assert all(q.maturity >= 9 / 365 for q in kept)
        # the 9-day quote sits exactly on the threshold and stays
        assert any(q.maturity == 9 / 365 for q in kept)
        assert not any(q.maturity == 8 / 365 for q in kept)

    def test_empty_input(self):
        assert filter_options([], 9 / 365, 0) == []

    def test_subset_order_and_idempotence(self):
        src = self.quotes()
        once = filter_options(src, 9 / 365, 0)
        assert [src.index(q) for q in once] == sorted(src.index(q) for q in once)
        assert filter_options(once, 9 / 365, 0) == once
