use deferral_core::ecology::EliteTable;
use deferral_core::simulation::{run_experiment, ExperimentSpec, Ranking, Status, UpfrontBudget};
use deferral_core::synthetic::{generate_synthetic, SyntheticProfile};
use deferral_core::SchemeConfig;

fn sites(seed: u64) -> Vec<deferral_core::SiteRecord> {
    generate_synthetic(&SyntheticProfile::default(), seed).unwrap()
}

#[test]
fn deferred_round_happens_at_year_zero() {
    let cfg = SchemeConfig { seed: 4, ..SchemeConfig::default() };
    let e = run_experiment(&sites(4), &cfg, &EliteTable::default(), &ExperimentSpec::default()).unwrap();
    assert!(e.deferred.summary.area_ha > 0.0);
    assert_eq!(e.deferred.summary.harvested_ha, 0.0);
    for s in &e.deferred.sites {
        assert!(matches!(s.status, Status::Conserved(0) | Status::Unselected | Status::Withdrawn(0)));
    }
    assert!(e.deferred.years[0].spent <= 5_000_000.0 + 1e-6);
}

#[test]
fn matched_budgets_have_equal_npv() {
    let cfg = SchemeConfig { seed: 2, ..SchemeConfig::default() };
    let e = run_experiment(&sites(2), &cfg, &EliteTable::default(), &ExperimentSpec::default()).unwrap();
    let d = deferral_core::finance::npv(&e.deferred.spending, cfg.discount_rate);
    let u = e.upfront_annual_budget * deferral_core::finance::annuity_due_factor(cfg.horizon(), cfg.discount_rate);
    assert!((d - u).abs() <= 0.01);
}

#[test]
fn fixed_budget_and_old_growth_ranking() {
    let cfg = SchemeConfig { seed: 7, ..SchemeConfig::default() };
    let spec = ExperimentSpec {
        upfront_budget: UpfrontBudget::Fixed(0.0),
        ranking: Ranking::OldGrowth,
        ..ExperimentSpec::default()
    };
    let data = sites(7);
    let e = run_experiment(&data, &cfg, &EliteTable::default(), &spec).unwrap();
    assert_eq!(e.upfront.summary.area_ha, 0.0);
    for s in &e.deferred.sites {
        assert!(deferral_core::ecology::is_old_growth(&data[s.site_index]));
    }
}

#[test]
fn experiments_are_deterministic() {
    let cfg = SchemeConfig { seed: 11, ..SchemeConfig::default() };
    let a = run_experiment(&sites(11), &cfg, &EliteTable::default(), &ExperimentSpec::default()).unwrap();
    let b = run_experiment(&sites(11), &cfg, &EliteTable::default(), &ExperimentSpec::default()).unwrap();
    assert_eq!(a, b);
}
