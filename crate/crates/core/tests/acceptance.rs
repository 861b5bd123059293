//! Acceptance suite: one PASS/FAIL line per criterion, then a single assertion
//! over all of them. Run with `--nocapture` to see the report.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use common::*;
use ctbands_core::dos::{dos_histogram, dos_linear_fit, dos_proportional_slope};
use ctbands_core::lattice::{assemble, check_conjugate_pair_spectrum, check_ct_anticommutation, BipartiteLattice};
use ctbands_core::models::*;
use ctbands_core::numerics::svd;
use ctbands_core::spectra::{exceptional_scan, multiset_max_deviation, solve, solve_lattice};
use ctbands_core::verify::probability_deviation;
use ctbands_core::Complex64;
use rand::Rng;

const PAIR_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Spectra gathered by criteria 1-6 for the conjugate-pair check.
#[derive(Default)]
struct Spectra(Vec<(String, Vec<Complex64>)>);

impl Spectra {
    fn push(&mut self, what: impl Into<String>, values: Vec<Complex64>) {
        self.0.push((what.into(), values));
    }
}

fn csqrt(x: f64) -> Complex64 {
    Complex64::new(x, 0.0).sqrt()
}

fn c1_rice_mele_exceptional_point(spectra: &mut Spectra) -> Outcome {
    let lattice = rice_mele_lattice(&RiceMeleSpec::new(40, 0.3)).unwrap();
    let gammas: Vec<f64> = (0..=1200).map(|i| i as f64 * 1e-3).collect();
    let start = Instant::now();
    let report = exceptional_scan(&lattice, &gammas).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    for &g in gammas.iter().step_by(25) {
        spectra.push(format!("rice-mele N=40 gamma={g}"), solve_lattice(&lattice, g).unwrap().eigenvalues());
    }
    match report.exceptional_point_estimate() {
        Some(ep) => outcome(
            (0.59..=0.61).contains(&ep) && elapsed < 5.0,
            format!("transition at {ep:.4} (window [0.59, 0.61]), runtime {elapsed:.3} s (< 5 s)"),
        ),
        None => outcome(false, "no transition found".into()),
    }
}

fn c2_rice_mele_spectrum(spectra: &mut Spectra) -> Outcome {
    let (n, delta, gamma) = (32, 0.3, 0.4);
    let report = solve_lattice(&rice_mele_lattice(&RiceMeleSpec::new(n, delta)).unwrap(), gamma).unwrap();
    let mut expected = Vec::new();
    for m in 0..n {
        let k = TAU * m as f64 / n as f64;
        let eps0_sq = 2.0 + 2.0 * delta * delta + 2.0 * (1.0 - delta * delta) * k.cos();
        let e = csqrt(eps0_sq - gamma * gamma);
        expected.extend([e, -e]);
    }
    let values = report.eigenvalues();
    let dev = multiset_max_deviation(&values, &expected).unwrap_or(f64::INFINITY);
    spectra.push("rice-mele N=32 gamma=0.4", values);
    outcome(dev <= 1e-9, format!("max deviation {dev:.2e} (<= 1e-9)"))
}

fn c3_bilayer_gap(spectra: &mut Spectra) -> Outcome {
    let grid = band_grid(&BilayerSpec::new(64, 1.0, 5.0, 0.98)).unwrap();
    let expected = ((5.0f64 - 4.0).powi(2) - 0.98f64.powi(2)).sqrt();
    spectra.push("bilayer band grid N=64 gamma=0.98", grid.eigenvalues());
    let min = grid
        .points
        .iter()
        .flat_map(|p| [p.plus.1, p.minus.1])
        .filter(|e| e.im == 0.0 && e.re > 0.0)
        .map(|e| e.re)
        .fold(f64::INFINITY, f64::min);
    let err = (min - expected).abs();
    outcome(
        err <= 1e-9 && (min - 0.19899).abs() < 1e-5,
        format!("min positive energy {min:.9}, expected {expected:.9}, error {err:.1e} (<= 1e-9)"),
    )
}

fn c4_bilayer_dirac_point(spectra: &mut Spectra) -> Outcome {
    let spec = BilayerSpec::new(64, 1.0, 5.0, 1.0);
    let grid = band_grid(&spec).unwrap();
    spectra.push("bilayer band grid N=64 gamma=1", grid.eigenvalues());
    let at_valley = grid.point(32, 32);
    let pass = at_valley.kx == PI && at_valley.ky == PI && at_valley.plus.1 == Complex64::new(0.0, 0.0);
    outcome(pass, format!("eps+(pi, pi) = {} (exactly 0)", at_valley.plus.1))
}

fn bilayer_fourier(n: usize, t: f64, gamma: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let (kx, ky) = (TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
            let q = t + 2.0 * (kx.cos() + ky.cos());
            let e = csqrt(q * q - gamma * gamma);
            out.extend([e, -e]);
        }
    }
    out
}

fn c5_real_space_vs_fourier(spectra: &mut Spectra) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [4, 6] {
        let lattice = bilayer_lattice(&BilayerSpec::new(n, 1.0, 5.0, 0.0)).unwrap();
        for gamma in [0.0, 0.5, 1.5] {
            let values = solve_lattice(&lattice, gamma).unwrap().eigenvalues();
            let dev = multiset_max_deviation(&values, &bilayer_fourier(n, 5.0, gamma)).unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
            spectra.push(format!("bilayer real space N={n} gamma={gamma}"), values);
        }
    }
    outcome(worst <= 1e-9, format!("max deviation {worst:.2e} over N in {{4, 6}} (<= 1e-9)"))
}

fn c6_random_residuals(spectra: &mut Spectra) -> Outcome {
    let mut rng = rng(0xC7_5EED);
    let mut worst: f64 = 0.0;
    let mut largest = 0;
    for trial in 0..50 {
        let n = if trial < 5 { 64 } else { rng.gen_range(1..=64) };
        largest = largest.max(n);
        let lattice = BipartiteLattice::new(random_real(&mut rng, n)).unwrap();
        let max_eps0 = svd(lattice.coupling(), 1e-12).unwrap().singular_values[0];
        let gamma = rng.gen_range(0.0..=2.0 * max_eps0);
        let h = assemble(&lattice, gamma).unwrap();
        let report = solve(&h).unwrap();
        worst = worst.max(report.max_relative_residual(&h));
        spectra.push(format!("random real Q trial {trial} N={n}"), report.eigenvalues());
    }
    outcome(worst <= 1e-9, format!("max relative residual {worst:.2e} over 50 lattices, N <= {largest} (<= 1e-9)"))
}

fn c7_conjugate_pairs(spectra: &Spectra) -> Outcome {
    let failed: Vec<&str> = spectra
        .0
        .iter()
        .filter(|(_, v)| !check_conjugate_pair_spectrum(v, PAIR_TOL))
        .map(|(name, _)| name.as_str())
        .collect();
    outcome(
        failed.is_empty(),
        format!("{} spectra checked at {PAIR_TOL:e}, failures: {failed:?}", spectra.0.len()),
    )
}

fn c8_dirac_probability() -> Outcome {
    let lattice = bilayer_lattice(&BilayerSpec::new(4, 1.0, 5.0, 0.5)).unwrap();
    let report = solve_lattice(&lattice, 0.5).unwrap();
    let reference = solve_lattice(&lattice, 0.0).unwrap();
    let unbroken = report.pairs.iter().filter(|p| !p.broken).count();
    match probability_deviation(&report, &reference) {
        Some(dev) => outcome(
            dev <= 1e-10 && unbroken == report.pairs.len(),
            format!("max per-site |psi|^2 change {dev:.2e} over {unbroken} unbroken channels (<= 1e-10)"),
        ),
        None => outcome(false, "no unbroken channel".into()),
    }
}

fn c9_group_velocity() -> Outcome {
    let spec = BilayerSpec::new(64, 1.0, 5.0, 1.0);
    let dk = 1e-3;
    let slope = bilayer_dispersion(&spec, PI + dk, PI, Sector::Plus).1.re / dk;
    let expected = 2f64.sqrt();
    let rel = (slope - expected).abs() / expected;
    outcome(rel <= 0.02, format!("slope {slope:.6} vs sqrt(2) = {expected:.6}, relative error {rel:.2e} (<= 2%)"))
}

fn c10_dos() -> Outcome {
    let start = Instant::now();
    let hist = dos_histogram(&BilayerSpec::new(2, 1.0, 5.0, 1.0), 512, 200).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let integral = hist.integral();
    let target = 1.0 / (4.0 * PI);
    let fit = dos_linear_fit(&hist, (0.05, 0.5)).unwrap();
    let origin_slope = dos_proportional_slope(&hist, (0.05, 0.5)).unwrap();
    let slope_rel = (fit.slope - target).abs() / target;
    let (asym, asym_ok) = hist.mirror_asymmetry();
    let pass = (integral - 2.0).abs() <= 1e-6 && slope_rel <= 0.10 && asym_ok && elapsed < 60.0;
    outcome(
        pass,
        format!(
            "integral {integral:.12} (2 +- 1e-6); fit slope {:.5} vs 1/(4pi) = {target:.5}, relative error {:.1}% \
             (<= 10%, through-origin slope {origin_slope:.5}); mirror asymmetry {asym:.1e} within sampling: {asym_ok}; \
             runtime {elapsed:.3} s (< 60 s)",
            fit.slope,
            100.0 * slope_rel
        ),
    )
}

fn c11_hyperboloid() -> Outcome {
    let spec = BilayerSpec::new(256, 1.0, 5.0, 0.98);
    let h = valley_analysis(&spec).unwrap().require_hyperboloid().unwrap();
    let c = (1.0f64 - 0.98 * 0.98).sqrt();
    let a = c / 2f64.sqrt();
    let params_ok = (h.c - c).abs() <= 1e-12 && (h.a - a).abs() <= 1e-12 && (h.b - a).abs() <= 1e-12;
    let grid = band_grid(&spec).unwrap();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for p in &grid.points {
        let (dx, dy) = (p.kx - PI, p.ky - PI);
        if dx.hypot(dy) <= 0.15 {
            let eps = p.plus.1.re;
            let lhs = (dx * dx) / (h.a * h.a) + (dy * dy) / (h.b * h.b) - (eps * eps) / (h.c * h.c);
            worst = worst.max((lhs + 1.0).abs());
            checked += 1;
        }
    }
    outcome(
        params_ok && checked > 0 && worst <= 0.03,
        format!("c = {:.5}, a = b = {:.5}; worst residual {worst:.2e} over {checked} grid points (<= 3%)", h.c, h.a),
    )
}

fn c12_ct_anticommutation() -> Outcome {
    let mut lattices = Vec::new();
    for n in [2, 5, 40] {
        for delta in [-0.5, 0.3, 0.9] {
            lattices.push(rice_mele_lattice(&RiceMeleSpec::new(n, delta)).unwrap());
        }
    }
    for n in [2, 4, 6] {
        for t in [5.0, 3.0, 0.25] {
            lattices.push(bilayer_lattice(&BilayerSpec::new(n, 1.0, t, 0.0)).unwrap());
        }
    }
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for lattice in &lattices {
        for gamma in [0.0, 0.37, 1.0, -0.8, 2.5, 1e3] {
            worst = worst.max(check_ct_anticommutation(&assemble(lattice, gamma).unwrap()));
            count += 1;
        }
    }
    outcome(worst == 0.0, format!("max residual {worst:e} over {count} Hamiltonians (exactly 0)"))
}

#[test]
fn acceptance() {
    let mut spectra = Spectra::default();
    let results = [
        ("1 Rice-Mele exceptional point", c1_rice_mele_exceptional_point(&mut spectra)),
        ("2 Rice-Mele spectrum oracle", c2_rice_mele_spectrum(&mut spectra)),
        ("3 Bilayer gap", c3_bilayer_gap(&mut spectra)),
        ("4 Bilayer Dirac point", c4_bilayer_dirac_point(&mut spectra)),
        ("5 Real-space/Fourier equivalence", c5_real_space_vs_fourier(&mut spectra)),
        ("6 Eigenpair residuals", c6_random_residuals(&mut spectra)),
        ("7 Conjugate pairs", c7_conjugate_pairs(&spectra)),
        ("8 Dirac-probability invariance", c8_dirac_probability()),
        ("9 Group velocity", c9_group_velocity()),
        ("10 Density of states", c10_dos()),
        ("11 Hyperboloid", c11_hyperboloid()),
        ("12 CT anticommutation", c12_ct_anticommutation()),
    ];
    let mut failed = Vec::new();
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
