//! The subcommands, as functions from parsed arguments to output text.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fair_noma::multiuser::{full_alloc_a, min_alloc_b, verify_fairness, ChannelSet};
use fair_noma::twouser::{allocation_bound, fair_region, PairCapacities};
use fair_noma::{ChannelPair, SystemParams};

use crate::error::{CliError, Result};
use crate::figures::FigureRun;
use crate::manifest::RunManifest;
use crate::parse::linear_to_db;

/// Command output plus warnings meant for stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn region(xi: f64, g1: f64, g2: f64, as_csv: bool) -> Result<Output> {
    let params = SystemParams::new(xi, 1.0)?;
    let mut warnings = Vec::new();
    let ch = ChannelPair::new(g1, g2)?;
    if g1 > g2 {
        warnings.push(format!("warning: g1 = {g1} exceeds g2 = {g2}; swapped so that g1 is the weaker user"));
    }
    let region = fair_region(&params, &ch)?;
    let at_inf = PairCapacities::evaluate(xi, &ch, region.a_inf)?;
    // the OMA baselines do not depend on the coefficient
    let oma = at_inf;
    let at_sup = PairCapacities::evaluate(xi, &ch, region.a_sup)?;
    let (g1, g2) = (ch.weak(), ch.strong());
    let mut out = String::new();
    if as_csv {
        out.push_str("xi,xi_db,g1,g2,a_inf,a_sup,c1_oma,c2_oma,c1_noma_ainf,c2_noma_ainf,c1_noma_asup,c2_noma_asup\n");
        let v = [
            xi,
            linear_to_db(xi),
            g1,
            g2,
            region.a_inf,
            region.a_sup,
            oma.c1_oma,
            oma.c2_oma,
            at_inf.c1_noma,
            at_inf.c2_noma,
            at_sup.c1_noma,
            at_sup.c2_noma,
        ];
        let cells: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    } else {
        let _ = writeln!(out, "xi={xi} (xi_db={})", linear_to_db(xi));
        let _ = writeln!(out, "g1={g1}\ng2={g2}");
        let _ = writeln!(out, "a_inf={}\na_sup={}", region.a_inf, region.a_sup);
        if region.is_degenerate() {
            let _ = writeln!(out, "note: equal gains, the fair region is the single point a_inf = a_sup");
        }
        let _ = writeln!(out, "oma: c1={} c2={}", oma.c1_oma, oma.c2_oma);
        let _ = writeln!(out, "noma at a_inf: c1={} c2={}", at_inf.c1_noma, at_inf.c2_noma);
        let _ = writeln!(out, "noma at a_sup: c1={} c2={}", at_sup.c1_noma, at_sup.c2_noma);
    }
    Ok(Output { stdout: out, warnings })
}

/// Where the users of a `multiuser` query come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Users {
    Gains(Vec<f64>),
    Random { k: usize, seed: u64, beta: f64 },
}

pub fn multiuser(xi: f64, users: Users) -> Result<Output> {
    SystemParams::new(xi, 1.0)?;
    let set = match users {
        Users::Gains(g) => ChannelSet::new(g)?,
        Users::Random { k, seed, beta } => {
            if k == 0 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            ChannelSet::sample(k, beta, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
    };
    let k = set.len();
    let b = min_alloc_b(xi, &set)?;
    let a = full_alloc_a(xi, &set)?;
    let rb = verify_fairness(xi, &set, &b)?;
    let ra = verify_fairness(xi, &set, &a)?;
    let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");

    let mut out = String::new();
    let _ = writeln!(out, "k={k}");
    let _ = writeln!(out, "xi={xi} (xi_db={})", linear_to_db(xi));
    let _ = writeln!(out, "gains={}", list(set.gains()));
    let _ = writeln!(out, "b={}", list(&b.coeffs));
    let _ = writeln!(out, "a={}", list(&a.coeffs));
    let _ = writeln!(out, "residual={}", a.residual);
    let _ = writeln!(out, "sum_b={}", b.total());
    let sum_a = a.total();
    let ok = sum_a <= 1.0 + 1e-12;
    let _ = writeln!(out, "sum_a={sum_a} ({})", if ok { "sum_a <= 1 holds" } else { "VIOLATES sum_a <= 1" });
    if k == 2 {
        let _ = writeln!(out, "one_minus_a1={}", 1.0 - a.coeffs[0]);
        let _ = writeln!(out, "pair_a_sup={}", allocation_bound(xi, set.gains()[0])?);
    }
    let _ = writeln!(out, "user,gain,b,a,c_oma,c_noma_b,c_noma_a,slack_b,slack_a");
    for i in 0..k {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            i + 1,
            set.gains()[i],
            b.coeffs[i],
            a.coeffs[i],
            ra.oma[i],
            rb.noma[i],
            ra.noma[i],
            rb.slacks[i],
            ra.slacks[i]
        );
    }
    if !ok {
        return Err(CliError::Domain(format!("{out}a-vector total {sum_a} exceeds 1")));
    }
    Ok(Output {
        stdout: out,
        warnings: Vec::new(),
    })
}

/// Runs `f` on a rayon pool of `workers` threads, or the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `figN.csv`, optionally `figN.py`, and `figN.manifest.json` into
/// `out_dir`. Returns every path written, manifest last.
pub fn write_figure(run: &FigureRun, out_dir: &Path, plot: bool, workers: Option<usize>) -> Result<Vec<PathBuf>> {
    let csv = with_workers(workers, || run.csv())??;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let stem = run.file_stem();
    let csv_path = out_dir.join(format!("{stem}.csv"));
    write(&csv_path, &csv)?;
    let mut paths = vec![csv_path];
    if plot {
        let script = out_dir.join(format!("{stem}.py"));
        write(&script, &run.plot_script(&format!("{stem}.csv")))?;
        paths.push(script);
    }
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    let manifest = RunManifest::new(run, paths.clone());
    write(&manifest_path, &manifest.to_json())?;
    paths.push(manifest_path);
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field<'a>(out: &'a str, key: &str) -> &'a str {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("{key} missing in {out}"))
    }

    #[test]
    fn region_example() {
        let o = region(1.0, 3.0, 8.0, false).unwrap();
        assert_eq!(field(&o.stdout, "a_inf"), "0.25");
        let a_sup: f64 = field(&o.stdout, "a_sup").parse().unwrap();
        assert!((a_sup - 1.0 / 3.0).abs() < 1e-15);
        assert!(o.warnings.is_empty());
    }

    #[test]
    fn region_swaps_and_flags_degenerate() {
        let o = region(1.0, 8.0, 3.0, false).unwrap();
        assert_eq!(o.warnings.len(), 1);
        assert_eq!(field(&o.stdout, "g1"), "3");
        let o = region(2.0, 1.5, 1.5, false).unwrap();
        assert!(o.stdout.contains("note: equal gains"));
        assert_eq!(field(&o.stdout, "a_inf"), field(&o.stdout, "a_sup"));
        assert!(matches!(region(1.0, -1.0, 2.0, false), Err(CliError::Domain(_))));
    }

    #[test]
    fn single_user_vectors() {
        let o = multiuser(100.0, Users::Gains(vec![0.7])).unwrap();
        assert_eq!(field(&o.stdout, "b"), "1");
        assert_eq!(field(&o.stdout, "a"), "1");
    }

    #[test]
    fn two_users_reproduce_the_pair_bound() {
        let o = multiuser(1e3, Users::Gains(vec![2.0, 0.3])).unwrap();
        let x: f64 = field(&o.stdout, "one_minus_a1").parse().unwrap();
        let y: f64 = field(&o.stdout, "pair_a_sup").parse().unwrap();
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn random_users_are_seeded() {
        let run = || multiuser(1e5, Users::Random { k: 5, seed: 9, beta: 1.0 }).unwrap().stdout;
        assert_eq!(run(), run());
        assert!(run().contains("sum_a <= 1 holds"));
    }
}
