"""Parsers, serializers, the bundled dataset, and the data-dir override."""

import pytest

from dlps import (
    Category,
    ParseError,
    assemble_dataset,
    bundled_benchmark,
    config_to_json,
    customers_to_csv,
    default_config,
    parse_config,
    parse_customers,
    parse_mcp,
    profile_to_csv,
    validate_dataset,
)

CUSTOMERS_CSV = """id,category,base_demand_kw
I1,industrial,30
I2,I,45.5
R1,Residential,8
"""

MCP_CSV = "state,mcp_rs_per_kwh,load_factor\n" + "".join(
    f"{i},{2.0 + i * 0.1:g},{0.5 + i * 0.02:g}\n" for i in range(1, 25)
)


class TestParseCustomers:
    def test_accepts_names_and_letters(self):
        customers = parse_customers(CUSTOMERS_CSV)
        assert [c.id for c in customers] == ["I1", "I2", "R1"]
        assert customers[1].category is Category.INDUSTRIAL
        assert customers[2].category is Category.RESIDENTIAL
        assert customers[1].base_demand == 45.5

    def test_blank_lines_skipped(self):
        text = "id,category,base_demand_kw\n\nI1,industrial,30\n\n"
        assert len(parse_customers(text)) == 1

    def test_empty_body_gives_empty_list(self):
        assert parse_customers("id,category,base_demand_kw\n") == []

    def test_missing_header(self):
        with pytest.raises(ParseError, match="missing header"):
            parse_customers("")

    def test_wrong_header_names_expected(self):
        with pytest.raises(ParseError, match="expected id,category,base_demand_kw"):
            parse_customers("customer,kind,kw\nI1,industrial,30\n")

    def test_field_count_carries_line_number(self):
        text = "id,category,base_demand_kw\nI1,industrial,30\nI2,industrial\n"
        with pytest.raises(ParseError) as err:
            parse_customers(text, source="feeder.csv")
        assert err.value.source == "feeder.csv"
        assert err.value.line == 3
        assert "feeder.csv:3" in str(err.value)

    def test_empty_id(self):
        with pytest.raises(ParseError, match="empty customer id"):
            parse_customers("id,category,base_demand_kw\n,industrial,30\n")

    def test_duplicate_id(self):
        text = "id,category,base_demand_kw\nI1,industrial,30\nI1,industrial,31\n"
        with pytest.raises(ParseError, match="duplicate customer id"):
            parse_customers(text)

    def test_unknown_category_names_field(self):
        with pytest.raises(ParseError) as err:
            parse_customers("id,category,base_demand_kw\nI1,farm,30\n")
        assert err.value.field == "category"
        assert err.value.line == 2

    def test_non_numeric_demand(self):
        with pytest.raises(ParseError, match="not a number"):
            parse_customers("id,category,base_demand_kw\nI1,industrial,lots\n")

    def test_nonpositive_demand(self):
        with pytest.raises(ParseError, match="must be > 0"):
            parse_customers("id,category,base_demand_kw\nI1,industrial,0\n")


class TestParseMcp:
    def test_full_day(self):
        rows = parse_mcp(MCP_CSV)
        assert [r.index for r in rows] == list(range(1, 25))
        assert rows[21].mcp == pytest.approx(4.2)

    def test_rows_sorted_even_if_input_is_not(self):
        lines = MCP_CSV.splitlines()
        shuffled = "\n".join([lines[0]] + lines[1:][::-1]) + "\n"
        rows = parse_mcp(shuffled)
        assert [r.index for r in rows] == list(range(1, 25))

    def test_wrong_state_count(self):
        text = "\n".join(MCP_CSV.splitlines()[:-1]) + "\n"
        with pytest.raises(ParseError, match="expected 24 states, found 23"):
            parse_mcp(text)

    def test_non_integer_state(self):
        text = MCP_CSV.replace("\n3,", "\nthree,", 1)
        with pytest.raises(ParseError, match="not an integer"):
            parse_mcp(text)

    def test_state_out_of_range(self):
        text = MCP_CSV.replace("\n24,", "\n25,", 1)
        with pytest.raises(ParseError, match="must be in 1..24"):
            parse_mcp(text)

    def test_duplicate_state(self):
        text = MCP_CSV.replace("\n24,", "\n23,", 1)
        with pytest.raises(ParseError, match="duplicate state 23"):
            parse_mcp(text)

    def test_nonpositive_mcp_names_line(self):
        text = MCP_CSV.replace("\n5,2.5,", "\n5,-2.5,", 1)
        with pytest.raises(ParseError) as err:
            parse_mcp(text, source="day.csv")
        assert err.value.field == "mcp_rs_per_kwh"
        assert err.value.line == 6

    def test_nonpositive_load_factor(self):
        text = MCP_CSV.replace(",0.52\n", ",0\n", 1)
        with pytest.raises(ParseError, match="load factor must be > 0"):
            parse_mcp(text)


class TestParseConfig:
    def test_empty_object_is_all_defaults(self):
        config = parse_config("{}")
        assert config == default_config()

    def test_partial_override_keeps_other_defaults(self):
        config = parse_config('{"profit_factors": {"industrial": 0.05}}')
        assert config.profit_factor(Category.INDUSTRIAL) == 0.05
        assert config.profit_factor(Category.RESIDENTIAL) == 0.03
        assert config.peak_states == frozenset(range(18, 24))

    def test_letter_keys_accepted(self):
        config = parse_config('{"profit_factors": {"R": 0.04}}')
        assert config.profit_factor(Category.RESIDENTIAL) == 0.04

    def test_peak_states_override(self):
        config = parse_config('{"peak_states": [10, 11, 12]}')
        assert config.peak_states == frozenset({10, 11, 12})

    def test_not_json(self):
        with pytest.raises(ParseError, match="not valid JSON"):
            parse_config("{nope")

    def test_not_an_object(self):
        with pytest.raises(ParseError, match="JSON object"):
            parse_config("[1]")

    def test_unknown_keys_rejected(self):
        with pytest.raises(ParseError, match="unknown configuration keys"):
            parse_config('{"margins": {}}')

    def test_unknown_category(self):
        with pytest.raises(ParseError, match="unknown category"):
            parse_config('{"profit_factors": {"farm": 0.1}}')

    def test_factor_out_of_range(self):
        with pytest.raises(ParseError, match="must be in \\[0, 1\\)"):
            parse_config('{"profit_factors": {"industrial": 1.5}}')

    def test_factor_not_a_number(self):
        with pytest.raises(ParseError, match="not a number"):
            parse_config('{"profit_factors": {"industrial": "lots"}}')

    def test_peak_states_must_be_list(self):
        with pytest.raises(ParseError, match="list of state indices"):
            parse_config('{"peak_states": "18-23"}')

    def test_peak_state_not_integer(self):
        with pytest.raises(ParseError, match="not an integer"):
            parse_config('{"peak_states": [18, true]}')

    def test_peak_state_out_of_range(self):
        with pytest.raises(ParseError, match="out of range"):
            parse_config('{"peak_states": [0]}')

    def test_duplicate_peak_state(self):
        with pytest.raises(ParseError, match="duplicate peak state"):
            parse_config('{"peak_states": [18, 18]}')

    def test_empty_peak_window(self):
        with pytest.raises(ParseError, match="must not be empty"):
            parse_config('{"peak_states": []}')

    def test_all_day_peak_rejected(self):
        states = list(range(1, 25))
        with pytest.raises(ParseError, match="at least one off-peak"):
            parse_config('{"peak_states": %s}' % states)


class TestRoundTrips:
    def test_customers(self):
        customers = parse_customers(CUSTOMERS_CSV)
        text = customers_to_csv(customers)
        assert parse_customers(text) == customers
        # canonical form is a fixed point
        assert customers_to_csv(parse_customers(text)) == text

    def test_profile_rows(self):
        rows = parse_mcp(MCP_CSV)
        text = profile_to_csv(rows)
        assert parse_mcp(text) == rows
        assert profile_to_csv(parse_mcp(text)) == text

    def test_profile_from_day(self, benchmark):
        text = profile_to_csv(benchmark.profile)
        rows = parse_mcp(text)
        assert [r.mcp for r in rows] == [s.mcp for s in benchmark.profile.states]

    def test_config(self):
        config = parse_config('{"profit_factors": {"industrial": 0.05}}')
        text = config_to_json(config)
        assert parse_config(text) == config


class TestAssembly:
    def test_only_present_categories_configured(self):
        customers = parse_customers("id,category,base_demand_kw\nI1,industrial,30\n")
        ds = assemble_dataset(customers, default_config(), parse_mcp(MCP_CSV))
        assert [cfg.category for cfg in ds.categories] == [Category.INDUSTRIAL]

    def test_peak_window_lands_on_profile(self):
        config = parse_config('{"peak_states": [5, 6]}')
        customers = parse_customers("id,category,base_demand_kw\nI1,industrial,30\n")
        ds = assemble_dataset(customers, config, parse_mcp(MCP_CSV))
        assert ds.profile.peak_indices == (5, 6)


class TestBundledBenchmark:
    def test_census(self, benchmark):
        assert len(benchmark.customers) == 177
        counts = {
            cat: len(benchmark.customers_in(cat))
            for cat in benchmark.categories_present
        }
        assert counts[Category.RESIDENTIAL] == 106
        assert counts[Category.COMMERCIAL] == 48
        assert counts[Category.INDUSTRIAL] == 23

    def test_industrial_aggregates(self, benchmark):
        demands = [c.base_demand for c in benchmark.customers_in(Category.INDUSTRIAL)]
        assert sum(demands) == pytest.approx(1230.0)
        assert sum(d * d for d in demands) == pytest.approx(74872.0)

    def test_reference_state(self, benchmark):
        state = benchmark.profile.state(22)
        assert state.mcp == pytest.approx(4.845626)
        assert state.load_factor == 1.0
        assert state.is_peak

    def test_profit_factors(self, benchmark):
        assert benchmark.profit_factor(Category.RESIDENTIAL) == 0.03
        assert benchmark.profit_factor(Category.COMMERCIAL) == 0.02
        assert benchmark.profit_factor(Category.INDUSTRIAL) == 0.01

    def test_passes_validation(self, benchmark):
        assert validate_dataset(benchmark) == []

    def test_labels_flag_the_synthetic_states(self, benchmark):
        assert benchmark.label == "bundled-benchmark"
        assert "synthetic" in benchmark.profile.source


class TestDataDirOverride:
    def test_reads_from_override_dir(self, benchmark, tmp_path, monkeypatch):
        (tmp_path / "customers.csv").write_text(
            "id,category,base_demand_kw\nI1,industrial,30\nI2,industrial,60\n"
        )
        (tmp_path / "mcp.csv").write_text(profile_to_csv(benchmark.profile))
        (tmp_path / "config.json").write_text("{}")
        monkeypatch.setenv("DLPS_DATA_DIR", str(tmp_path))
        ds = bundled_benchmark()
        assert len(ds.customers) == 2
        assert ds.customers[0].id == "I1"

    def test_missing_override_file_raises(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DLPS_DATA_DIR", str(tmp_path))
        with pytest.raises(OSError):
            bundled_benchmark()
