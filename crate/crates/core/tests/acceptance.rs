//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test --release --test acceptance -- --nocapture`.

use std::time::Instant;

use padicjc::prime::Prime;
use padicjc::scalar::PadicScalar;
use padicjc::verify::{self, CheckResult};
use padicjc::viz;

const SEED: u64 = 0;

fn report(criterion: &str, results: &[CheckResult]) {
    let started = Instant::now();
    let _ = started;
    let passed = results.iter().all(|r| r.passed);
    let status = if passed { "PASS" } else { "FAIL" };
    let details: Vec<String> = results
        .iter()
        .map(|r| format!("{}: {}", r.name, r.details))
        .collect();
    println!("{status} {criterion} [{}]", details.join("; "));
    assert!(passed, "{criterion}: {}", details.join("; "));
}

fn timed<F: FnOnce() -> Vec<CheckResult>>(criterion: &str, f: F) {
    let started = Instant::now();
    let results = f();
    let elapsed = started.elapsed();
    print!("({elapsed:.2?}) ");
    report(criterion, &results);
}

#[test]
fn criterion_01_orbit_count_grid() {
    timed(
        "criterion 1: orbit-count grid vs census (p in {2,3,5,7,13}, r in -2..2, 20 k/prime, m=6)",
        || {
            vec![verify::check_orbits_vs_census(
                SEED,
                &[2, 3, 5, 7, 13],
                20,
                6,
            )]
        },
    );
}

#[test]
fn criterion_02_two_squares_image() {
    timed(
        "criterion 2: sum-of-two-squares image vs census over all residues mod p^6",
        || vec![verify::check_two_squares_vs_census()],
    );
}

#[test]
fn criterion_03_series_suite() {
    timed(
        "criterion 3: series suite, 500 samples/prime, defect ord >= 28 at precision 32",
        || {
            vec![
                verify::check_exp_homomorphism(SEED, 500, 28),
                verify::check_trig_identities(SEED, 500, 28),
            ]
        },
    );
}

#[test]
fn criterion_04_hensel_suite() {
    timed(
        "criterion 4: 200 admissible Hensel instances, ord(f(a)) >= 32 and ord(a - a1) >= r - s",
        || vec![verify::check_hensel_instances(SEED, 40)],
    );
}

#[test]
fn criterion_05_integrability() {
    timed(
        "criterion 5: Poisson bracket exactly zero, 200 exact points/prime with z != 0",
        || vec![verify::check_poisson(SEED, 200)],
    );
}

#[test]
fn criterion_06_critical_classification() {
    timed(
        "criterion 6: rank-1 constructions (50 a/prime) and 500 random points vs Jacobian rank",
        || {
            vec![
                verify::check_rank1_classification(SEED, 50),
                verify::check_regular_classification(SEED, 500),
            ]
        },
    );
}

#[test]
fn criterion_07_z_projection() {
    timed(
        "criterion 7: z-projection criterion vs direct square test, 500 samples/prime",
        || vec![verify::check_z_projection(SEED, 500)],
    );
}

#[test]
fn criterion_08_fiber_descriptors() {
    timed(
        "criterion 8: fiber descriptors consistent with the JC census on 6 reference values/prime",
        || vec![verify::check_fiber_descriptors_vs_census()],
    );
}

#[test]
fn criterion_09_p2_image() {
    timed(
        "criterion 9: p=2 image grid of 200 points: witnesses, exclusions, census consistency",
        || vec![verify::check_p2_image_grid(200)],
    );
}

#[test]
fn criterion_10_normal_forms() {
    timed(
        "criterion 10: rank-1 identities for 25 parameters, rank-0 forms, charpoly factorizations",
        || {
            vec![
                verify::check_normal_forms_rank1(25, SEED),
                verify::check_normal_forms_rank0(SEED, 50),
            ]
        },
    );
}

#[test]
fn criterion_11_flow() {
    timed(
        "criterion 11: oscillator flow equals the closed form and conserves energy to degree 12",
        || vec![verify::check_flows(SEED)],
    );
}

#[test]
fn criterion_12_viz() {
    let started = Instant::now();
    // golden byte equality for the three exported datasets
    let golden_critical = include_str!("golden/critical_set_p3.csv");
    let golden_fiber = include_str!("golden/fiber_p2_22_1.csv");
    let golden_sectors = include_str!("golden/circle_sectors_p5.csv");

    let p3 = Prime::new(3).unwrap();
    let p2 = Prime::new(2).unwrap();
    let p5 = Prime::new(5).unwrap();

    let critical = viz::render_figure(
        &viz::critical_set_dataset(p3, 4).unwrap(),
        viz::FigureMapping::TwoDim,
        6,
    )
    .unwrap();
    let jh = padicjc::jc::MomentumValue::new(
        PadicScalar::from_integer(p2, 22),
        PadicScalar::from_integer(p2, 1),
    );
    let fiber = viz::render_figure(
        &viz::fiber_dataset(p2, &jh, 5).unwrap(),
        viz::FigureMapping::OneDim,
        6,
    )
    .unwrap();
    let sectors = viz::render_figure(
        &viz::circle_sector_dataset(p5, 40).unwrap(),
        viz::FigureMapping::TwoDim,
        6,
    )
    .unwrap();

    let golden_ok =
        critical == golden_critical && fiber == golden_fiber && sectors == golden_sectors;
    let injectivity = verify::check_viz();
    let elapsed = started.elapsed();
    let passed = golden_ok && injectivity.passed;
    let status = if passed { "PASS" } else { "FAIL" };
    println!(
        "({elapsed:.2?}) {status} criterion 12: golden-file byte equality (3 datasets) and depth-6 injectivity [{}]",
        injectivity.details
    );
    assert!(golden_ok, "golden files differ");
    assert!(injectivity.passed, "{}", injectivity.details);
}
