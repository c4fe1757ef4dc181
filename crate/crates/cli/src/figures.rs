//! CSV reproduction of the six figures.

use serde::{Deserialize, Serialize};

use fair_noma::ergodic::{ergodic_curve_point, high_snr_ergodic};
use fair_noma::mcsim::{
    run_ergodic_pair, run_multiuser_power, run_outage, run_pairing, run_pairing_sweep, Scenario, SimConfig,
    SimResult, DEFAULT_FIXED_A,
};
use fair_noma::outage::outage_point;
use fair_noma::pairing::{expected_gain_ainf_approx, expected_gain_asup};
use fair_noma::{Policy, SystemParams};

use crate::error::{CliError, Result};
use crate::parse::db_to_linear;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_R0: f64 = 2.0;
pub const DEFAULT_BETA: f64 = 1.0;
pub const FIGURE4_K: usize = 10;
pub const FIGURE6_K: usize = 5;
pub const PAIRING_XI_DB: f64 = 50.0;

pub const FIGURE1_HEADER: &str = "xi_db,e_c1_oma,e_c2_oma,e_c1_noma_ainf_cf,e_c2_noma_asup_cf,\
e_c1_noma_ainf_mc,e_c2_noma_asup_mc,approx_c1,approx_c2";

/// Overrides for a figure run; `None` falls back to the figure's default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub xi_db: Option<Vec<f64>>,
    pub k_grid: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub beta: Option<f64>,
    pub r0: Option<f64>,
    pub fixed_a: Option<f64>,
}

/// Everything that determines a figure's CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRun {
    pub figure: u8,
    pub config: SimConfig,
    /// The SNR grid as given, echoed verbatim in the `xi_db` column.
    pub xi_db_grid: Vec<f64>,
    /// Population sizes for the K sweeps (figures 3 and 5); empty otherwise.
    pub k_grid: Vec<usize>,
}

fn default_db_grid() -> Vec<f64> {
    (0..=30).map(|i| 2.0 * i as f64).collect()
}

pub fn scenario_for(figure: u8) -> Result<Scenario> {
    match figure {
        1 | 2 => Ok(Scenario::PairIid),
        3..=5 => Ok(Scenario::PairMinmax),
        6 => Ok(Scenario::Multiuser),
        _ => Err(CliError::Usage(format!("figure {figure} does not exist (expected 1..6)"))),
    }
}

fn is_k_sweep(figure: u8) -> bool {
    matches!(figure, 3 | 5)
}

impl FigureRun {
    pub fn new(figure: u8, opts: &FigureOptions) -> Result<Self> {
        let scenario = scenario_for(figure)?;
        let sweep = is_k_sweep(figure);
        let xi_db_grid = opts.xi_db.clone().unwrap_or_else(|| {
            if sweep {
                vec![PAIRING_XI_DB]
            } else {
                default_db_grid()
            }
        });
        let k_grid = if sweep { opts.k_grid.clone().unwrap_or_else(|| (2..=30).collect()) } else { Vec::new() };
        let k_users = match figure {
            4 => opts.k.unwrap_or(FIGURE4_K),
            6 => opts.k.unwrap_or(FIGURE6_K),
            3 | 5 => k_grid.first().copied().unwrap_or(2),
            _ => 2,
        };
        let policy = match figure {
            1 => Policy::Inf,
            2 => Policy::Mid,
            4 | 5 => Policy::Fixed(opts.fixed_a.unwrap_or(DEFAULT_FIXED_A)),
            _ => Policy::Sup,
        };
        let run = FigureRun {
            figure,
            config: SimConfig {
                trials: opts.trials.unwrap_or(DEFAULT_TRIALS),
                seed: opts.seed.unwrap_or(DEFAULT_SEED),
                xi_grid: xi_db_grid.iter().map(|&d| db_to_linear(d)).collect(),
                beta: opts.beta.unwrap_or(DEFAULT_BETA),
                k_users,
                r0: opts.r0.unwrap_or(DEFAULT_R0),
                policy,
                scenario,
            },
            xi_db_grid,
            k_grid,
        };
        run.validate()?;
        Ok(run)
    }

    pub fn validate(&self) -> Result<()> {
        let scenario = scenario_for(self.figure)?;
        if self.config.scenario != scenario {
            return Err(CliError::Usage(format!(
                "figure {} needs scenario {scenario:?}, got {:?}",
                self.figure, self.config.scenario
            )));
        }
        self.config.validate()?;
        if self.xi_db_grid.len() != self.config.xi_grid.len() {
            return Err(CliError::Usage("xi_db_grid and config.xi_grid differ in length".into()));
        }
        if is_k_sweep(self.figure) {
            if self.k_grid.is_empty() {
                return Err(CliError::Usage(format!("figure {} needs a k grid", self.figure)));
            }
            if let Some(k) = self.k_grid.iter().find(|&&k| k < 2) {
                return Err(CliError::Usage(format!("k grid: population size {k} must be at least 2")));
            }
        }
        Ok(())
    }

    pub fn file_stem(&self) -> String {
        format!("fig{}", self.figure)
    }

    /// The figure's CSV. Bit-identical for identical runs whatever the
    /// size of the rayon pool it executes on.
    pub fn csv(&self) -> Result<String> {
        self.validate()?;
        let (header, rows) = match self.figure {
            1 => figure1(self)?,
            2 => figure2(self)?,
            3 => figure3(self)?,
            4 => figure4(self)?,
            5 => figure5(self)?,
            _ => figure6(self)?,
        };
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header.split(',')).map_err(csv_err)?;
        for row in rows {
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    /// A matplotlib script that plots `csv_name` when run from its directory.
    pub fn plot_script(&self, csv_name: &str) -> String {
        let (x, ys, title) = match self.figure {
            1 => ("xi_db", &FIGURE1_HEADER[6..], "Ergodic capacity, NOMA vs OMA"),
            2 => (
                "xi_db",
                "p_oma_weak_cf,p_oma_strong_cf,p_noma_weak_ainf_cf,p_noma_strong_asup_cf",
                "Outage probability",
            ),
            3 => ("k", "c_min_oma,c_max_oma,c_min_inf,c_max_inf,c_min_sup,c_max_sup", "Pairing capacities"),
            4 => ("xi_db", "s_oma,s_inf,s_sup,s_fixed", "Sum rate: Fair-NOMA, fixed-power NOMA, OMA"),
            5 => ("k", "gain_sup_cf,gain_sup_mc,gain_inf_approx,gain_inf_mc,gain_fixed_mc", "Pairing gain"),
            _ => ("xi_db", "sum_b,sum_a", "Total power of K-user allocations"),
        };
        let ys: Vec<String> = ys.split(',').map(|c| format!("\"{c}\"")).collect();
        let log_y = if self.figure == 2 { "ax.set_yscale(\"log\")\n" } else { "" };
        format!(
            "import pandas as pd\n\
             import matplotlib.pyplot as plt\n\
             \n\
             df = pd.read_csv(\"{csv_name}\")\n\
             fig, ax = plt.subplots()\n\
             for col in [{}]:\n    ax.plot(df[\"{x}\"], df[col], label=col)\n\
             {log_y}\
             ax.set_xlabel(\"{x}\")\n\
             ax.set_title(\"{title}\")\n\
             ax.legend()\n\
             fig.savefig(\"{}.png\", dpi=150)\n",
            ys.join(", "),
            self.file_stem()
        )
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn f(v: f64) -> String {
    format!("{v:.16e}")
}

fn mc(r: &SimResult) -> [String; 2] {
    [f(r.mean), f(r.std_error)]
}

type Table = (String, Vec<Vec<String>>);

fn params(run: &FigureRun, xi: f64) -> Result<SystemParams> {
    Ok(SystemParams::new(xi, run.config.beta)?.with_r0(run.config.r0)?)
}

fn figure1(run: &FigureRun) -> Result<Table> {
    let inf = run_ergodic_pair(&run.config)?;
    let sup = run_ergodic_pair(&SimConfig {
        policy: Policy::Sup,
        ..run.config.clone()
    })?;
    let mut rows = Vec::new();
    for ((db, a), b) in run.xi_db_grid.iter().zip(&inf).zip(&sup) {
        let p = params(run, a.xi)?;
        let cf = ergodic_curve_point(&p)?;
        let hi = high_snr_ergodic(&p);
        rows.push(vec![
            f(*db),
            f(cf.e_c1_oma),
            f(cf.e_c2_oma),
            f(cf.e_c1_noma_ainf),
            f(cf.e_c2_noma_asup),
            f(a.c1_noma.mean),
            f(b.c2_noma.mean),
            f(hi.c1_ainf),
            f(hi.c2_asup),
        ]);
    }
    Ok((FIGURE1_HEADER.to_string(), rows))
}

fn figure2(run: &FigureRun) -> Result<Table> {
    let header = "xi_db,p_oma_weak_cf,p_oma_strong_cf,p_noma_weak_ainf_cf,p_noma_strong_asup_cf,\
p_oma_weak_mc,p_oma_weak_se,p_oma_strong_mc,p_oma_strong_se,p_noma_weak_ainf_mc,p_noma_weak_ainf_se,\
p_noma_strong_asup_mc,p_noma_strong_asup_se,p_mid_weak_mc,p_mid_weak_se,p_mid_strong_mc,p_mid_strong_se";
    let sims = run_outage(&run.config)?;
    let mut rows = Vec::new();
    for (db, s) in run.xi_db_grid.iter().zip(&sims) {
        let cf = outage_point(&params(run, s.xi)?)?;
        let mut row = vec![
            f(*db),
            f(cf.p_oma_weak),
            f(cf.p_oma_strong),
            f(cf.p_noma_weak_ainf),
            f(cf.p_noma_strong_asup),
        ];
        for r in [
            &s.p_oma_weak,
            &s.p_oma_strong,
            &s.p_noma_weak_ainf,
            &s.p_noma_strong_asup,
            &s.p_mid_weak,
            &s.p_mid_strong,
        ] {
            row.extend(mc(r));
        }
        rows.push(row);
    }
    Ok((header.to_string(), rows))
}

/// Maps each pairing point back to the dB value of its SNR.
fn db_of(run: &FigureRun, xi: f64) -> f64 {
    let i = run.config.xi_grid.iter().position(|&x| x == xi).unwrap_or(0);
    run.xi_db_grid[i]
}

fn figure3(run: &FigureRun) -> Result<Table> {
    let header = "xi_db,k,c_min_oma,c_min_oma_se,c_max_oma,c_max_oma_se,c_min_inf,c_min_inf_se,\
c_max_inf,c_max_inf_se,c_min_sup,c_min_sup_se,c_max_sup,c_max_sup_se";
    let rows = run_pairing_sweep(&run.config, &run.k_grid)?
        .iter()
        .map(|p| {
            let mut row = vec![f(db_of(run, p.xi)), p.k.to_string()];
            for r in [&p.c_min_oma, &p.c_max_oma, &p.c_min_inf, &p.c_max_inf, &p.c_min_sup, &p.c_max_sup] {
                row.extend(mc(r));
            }
            row
        })
        .collect();
    Ok((header.to_string(), rows))
}

fn figure4(run: &FigureRun) -> Result<Table> {
    let header = "xi_db,k,fixed_a,s_oma,s_oma_se,s_inf,s_inf_se,s_sup,s_sup_se,s_fixed,s_fixed_se";
    let rows = run_pairing(&run.config)?
        .iter()
        .map(|p| {
            let mut row = vec![f(db_of(run, p.xi)), p.k.to_string(), f(p.fixed_a)];
            for r in [&p.s_oma, &p.s_inf, &p.s_sup, &p.s_fixed] {
                row.extend(mc(r));
            }
            row
        })
        .collect();
    Ok((header.to_string(), rows))
}

fn figure5(run: &FigureRun) -> Result<Table> {
    let header = "xi_db,k,fixed_a,gain_sup_cf,gain_sup_mc,gain_sup_se,gain_inf_approx,gain_inf_mc,gain_inf_se,\
gain_fixed_mc,gain_fixed_se";
    let mut rows = Vec::new();
    for p in run_pairing_sweep(&run.config, &run.k_grid)? {
        let approx = expected_gain_ainf_approx(p.k, &params(run, p.xi)?)?;
        let mut row = vec![f(db_of(run, p.xi)), p.k.to_string(), f(p.fixed_a)];
        row.push(f(expected_gain_asup(p.k)?.value));
        row.extend(mc(&p.gain_sup));
        row.push(f(approx));
        row.extend(mc(&p.gain_inf));
        row.extend(mc(&p.gain_fixed));
        rows.push(row);
    }
    Ok((header.to_string(), rows))
}

fn figure6(run: &FigureRun) -> Result<Table> {
    let header = "xi_db,k,sum_b,sum_b_se,sum_a,sum_a_se";
    let rows = run_multiuser_power(&run.config)?
        .iter()
        .zip(&run.xi_db_grid)
        .map(|(p, db)| {
            let mut row = vec![f(*db), p.k.to_string()];
            row.extend(mc(&p.sum_b));
            row.extend(mc(&p.sum_a));
            row
        })
        .collect();
    Ok((header.to_string(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(figure: u8) -> FigureRun {
        let opts = FigureOptions {
            trials: Some(2000),
            xi_db: Some(vec![0.0, 30.0]),
            k_grid: Some(vec![2, 3]),
            ..Default::default()
        };
        FigureRun::new(figure, &opts).unwrap()
    }

    #[test]
    fn defaults() {
        let r = FigureRun::new(2, &FigureOptions::default()).unwrap();
        assert_eq!(r.config.r0, 2.0);
        assert_eq!(r.config.beta, 1.0);
        assert_eq!(r.xi_db_grid.len(), 31);
        let r = FigureRun::new(3, &FigureOptions::default()).unwrap();
        assert_eq!(r.xi_db_grid, vec![50.0]);
        assert_eq!(r.k_grid, (2..=30).collect::<Vec<_>>());
        assert_eq!(FigureRun::new(4, &FigureOptions::default()).unwrap().config.k_users, 10);
        assert_eq!(FigureRun::new(6, &FigureOptions::default()).unwrap().config.k_users, 5);
        assert!(FigureRun::new(7, &FigureOptions::default()).is_err());
        assert!(FigureRun::new(0, &FigureOptions::default()).is_err());
    }

    #[test]
    fn csv_shapes() {
        for fig in 1..=6 {
            let run = small(fig);
            let text = run.csv().unwrap();
            assert!(!text.contains('\r'));
            let lines: Vec<&str> = text.lines().collect();
            let cols = lines[0].split(',').count();
            let expect_rows = if is_k_sweep(fig) { 4 } else { 2 };
            assert_eq!(lines.len(), 1 + expect_rows, "figure {fig}");
            assert!(lines.iter().all(|l| l.split(',').count() == cols));
        }
        assert!(small(1).csv().unwrap().starts_with(&format!("{FIGURE1_HEADER}\n")));
    }

    #[test]
    fn values_round_trip() {
        let text = small(1).csv().unwrap();
        let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
        let v: f64 = row[0].parse().unwrap();
        assert_eq!(v, 30.0);
        let c: f64 = row[1].parse().unwrap();
        let p = SystemParams::new(1e3, 1.0).unwrap();
        assert_eq!(c, fair_noma::ergodic::ergodic_oma(&p).unwrap().c1);
    }

    #[test]
    fn plot_script_names_the_csv() {
        let s = small(2).plot_script("fig2.csv");
        assert!(s.contains("read_csv(\"fig2.csv\")"));
        assert!(s.contains("set_yscale"));
    }
}
