from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fashion_abm.model import ATTRIBUTE_NAMES, purchase_probability
from fashion_abm.population import (DEFAULT_BETAS, CsvSchemaError, InvalidSpecError, PopulationSpec, build_graph,
                                    load_population_csv, sample_daily_contacts, synthesize_population,
                                    write_population_csv)

UNIFORM = {k: (1.0, 1.0) for k in DEFAULT_BETAS}


class TestSynthesis:
    def test_six_agents(self, rng):
        agents = synthesize_population(PopulationSpec(n_agents=6, attribute_distributions=UNIFORM), rng)
        assert len(agents) == 6
        for a in agents:
            assert all(0.0 <= v <= 1.0 for v in a.attributes.as_array())
            assert a.purchase_prob == purchase_probability(a.attributes)
            assert 0.1 <= min(a.susceptibilities.s_pp, a.susceptibilities.s_sm, a.susceptibilities.s_gov)

    def test_female_fraction(self):
        fracs = [np.mean([a.attributes.sex for a in synthesize_population(PopulationSpec(),
                                                                          np.random.default_rng(s))])
                 for s in range(10)]
        assert np.mean(fracs) == pytest.approx(0.80, abs=0.04)

    def test_degenerate_beta(self, rng):
        spec = PopulationSpec(n_agents=120, attribute_distributions={**DEFAULT_BETAS, "env": (1e6, 1e6)})
        env = [a.attributes.env for a in synthesize_population(spec, rng)]
        assert max(abs(e - 0.5) for e in env) < 0.01

    def test_age_brackets(self, rng):
        ages = Counter(a.attributes.age for a in synthesize_population(PopulationSpec(), rng))
        assert set(ages) <= {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}
        assert ages[0.0] / 1050 == pytest.approx(0.5, abs=0.06)

    @pytest.mark.parametrize("kwargs", [dict(n_agents=100), dict(n_agents=0),
                                        dict(attribute_distributions={**DEFAULT_BETAS, "env": (0, 1)}),
                                        dict(female_fraction=1.5), dict(susceptibility_range=(0.5, 0.2))])
    def test_invalid_spec(self, rng, kwargs):
        with pytest.raises(InvalidSpecError):
            synthesize_population(PopulationSpec(**kwargs), rng)

    def test_seeded_determinism(self):
        a = synthesize_population(PopulationSpec(n_agents=60), np.random.default_rng(3))
        b = synthesize_population(PopulationSpec(n_agents=60), np.random.default_rng(3))
        assert a == b


class TestCsv:
    def _write(self, path, rows):
        path.write_text(",".join(ATTRIBUTE_NAMES) + "\n" + "".join(",".join(r) + "\n" for r in rows))

    def test_round_trip(self, tmp_path, rng):
        agents = synthesize_population(PopulationSpec(n_agents=6), rng)
        write_population_csv(agents, tmp_path / "p.csv")
        loaded = load_population_csv(tmp_path / "p.csv", rng=np.random.default_rng(0))
        assert [a.attributes for a in loaded] == [a.attributes for a in agents]

    def test_error_names_row_and_column(self, tmp_path):
        rows = [["0.5"] * 9 for _ in range(6)]
        rows[3][ATTRIBUTE_NAMES.index("env")] = "1.3"
        self._write(tmp_path / "p.csv", rows)
        with pytest.raises(CsvSchemaError) as err:
            load_population_csv(tmp_path / "p.csv")
        assert (err.value.row, err.value.column) == (4, "env")
        assert "row 4" in str(err.value) and "env" in str(err.value)

    def test_unparsable(self, tmp_path):
        rows = [["0.5"] * 9, ["0.5"] * 8 + ["abc"]]
        self._write(tmp_path / "p.csv", rows)
        with pytest.raises(CsvSchemaError, match="row 2"):
            load_population_csv(tmp_path / "p.csv")

    def test_bad_header(self, tmp_path):
        (tmp_path / "p.csv").write_text("a,b,c\n1,2,3\n")
        with pytest.raises(CsvSchemaError):
            load_population_csv(tmp_path / "p.csv")

    def test_empty_file(self, tmp_path):
        (tmp_path / "p.csv").write_text("")
        with pytest.raises(InvalidSpecError):
            load_population_csv(tmp_path / "p.csv")


class TestGraph:
    def test_six_agents_is_invalid(self, rng):
        with pytest.raises(InvalidSpecError):
            build_graph(6, rng)

    def test_full_size_degrees(self, rng):
        g = build_graph(1050, rng)
        contacts = g.contacts
        assert contacts.shape == (1050, 15)
        # exhaustive recount
        degrees = [len(set(row)) for row in contacts.tolist()]
        assert degrees == [15] * 1050
        cliques = {tuple(sorted([i, *g.inner[i]])) for i in range(1050)}
        assert len(cliques) == 175

    @given(st.integers(3, 30), st.integers(0, 2**32 - 1))
    def test_contacts_unique_and_exclude_self(self, cliques, seed):
        n = 6 * cliques
        g = build_graph(n, np.random.default_rng(seed))
        for i, row in enumerate(g.contacts.tolist()):
            assert len(row) == len(set(row)) and i not in row
            assert all(0 <= j < n for j in row)
            assert all(j // 6 == i // 6 for j in g.inner[i])
            assert all(j // 6 != i // 6 for j in g.outer[i])

    def test_inner_circle_symmetric(self, rng):
        g = build_graph(60, rng)
        for i in range(60):
            for j in g.inner[i]:
                assert i in g.inner[j]


class TestDailyContacts:
    def test_counts_and_subset(self, rng):
        g = build_graph(120, rng)
        seen = Counter()
        for i in range(2000):
            agent = i % 120
            picked = sample_daily_contacts(agent, g, rng)
            seen[len(picked)] += 1
            assert set(picked) <= set(g.contacts[agent].tolist())
            assert len(picked) == len(set(picked))
        assert set(seen) == {6, 7, 8, 9, 11, 12, 13, 14}

    def test_inclusion_frequency(self):
        # each contact is drawn with probability E[count]/15 = 10/15
        rng = np.random.default_rng(7)
        g = build_graph(60, rng)
        target = int(g.contacts[0][3])
        hits = sum(target in sample_daily_contacts(0, g, rng) for _ in range(20_000))
        assert hits / 20_000 == pytest.approx(10 / 15, abs=0.02)
