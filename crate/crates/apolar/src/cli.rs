//! Batch-oriented command line front end.
//!
//! Every command maps every outcome to exactly one exit code:
//!
//! - 0: success or affirmative verdict,
//! - 1: checked negative (membership false, degenerate form, Hankel or
//!   symmetry defect, failed verification),
//! - 2: input error (unknown flags, unreadable files, malformed data),
//! - 3: numeric non-convergence.
//!
//! Machine output goes to `--out` when given, stdout otherwise; `--quiet`
//! suppresses the human framing around it. All randomness flows from
//! explicit `--seed` values, so identical invocations produce identical
//! bytes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::form::Form;
use crate::io;
use crate::ledger;
use crate::matrix::rational_to_string;
use crate::numeric::{DecomposeConfig, DecomposeStatus};
use crate::polarity::{self, BiquadricOutcome, DualOutcome};
use crate::powersum::{self, AlphaSolution};
use crate::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "apolar",
    version,
    about = "Exact apolarity calculus: polars, catalecticants, dual forms, power sums and the conic-count ledger",
    disable_help_subcommand = true
)]
struct Cli {
    /// Write the machine-readable output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress human-readable framing around machine output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterated first polar of a form at a point.
    Polar {
        /// Path to the form file.
        #[arg(long)]
        form: PathBuf,
        /// Point as comma-separated rationals, e.g. "1,-2/3,0".
        #[arg(long)]
        point: String,
        /// How many times to take the polar.
        #[arg(long, default_value_t = 1)]
        iterate: u32,
    },
    /// Apolarity pairing of two forms of equal degree on opposite spaces.
    Pair {
        /// Path to the form on the dual space.
        #[arg(long)]
        g: PathBuf,
        /// Path to the form being paired against.
        #[arg(long)]
        f: PathBuf,
    },
    /// Catalecticant matrix of a form in a given polar degree.
    Cat {
        #[arg(long)]
        form: PathBuf,
        /// Polar degree, between 1 and the degree of the form.
        #[arg(long)]
        k: u32,
        /// Also list the row and column monomial bases.
        #[arg(long)]
        basis: bool,
    },
    /// Test invertibility of the middle catalecticant (exit 0 yes, 1 no).
    Nondegenerate {
        #[arg(long)]
        form: PathBuf,
    },
    /// Dual form of a non-degenerate form, or the Hankel defect report.
    Dual {
        #[arg(long)]
        form: PathBuf,
    },
    /// Reconstruct a quartic from a swap-symmetric biquadric matrix.
    Biquadric {
        /// Path to the matrix in plain text ("rows cols" header).
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Power-sum representations: verify, solve, test membership, plant,
    /// decompose.
    #[command(subcommand)]
    Vsp(VspCommand),
    /// Derived integer invariants and the consistency sweep.
    Ledger {
        /// Curve degree (at least 5).
        #[arg(long)]
        d: i64,
        /// Also sweep the nine identities for every degree up to this bound.
        #[arg(long = "max-d")]
        max_d: Option<i64>,
    },
}

#[derive(Subcommand)]
enum VspCommand {
    /// Check a claimed representation against a form.
    Verify {
        #[arg(long)]
        form: PathBuf,
        /// Representation file; rational entries give an exact verdict,
        /// float entries a residual.
        #[arg(long)]
        rep: PathBuf,
    },
    /// Solve for the coefficients expressing the form in given powers.
    Solve {
        #[arg(long)]
        form: PathBuf,
        /// Points file, one comma-separated point per line.
        #[arg(long)]
        points: PathBuf,
    },
    /// Run the three equivalent membership routes for a quartic.
    Mukai {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Draw a deterministic planted instance.
    Plant(PlantArgs),
    /// Floating-point decomposition search.
    Decompose {
        #[arg(long)]
        form: PathBuf,
        /// Number of power-sum terms.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        restarts: u32,
        #[arg(long, default_value_t = 200)]
        max_iter: u32,
        /// Acceptance bound on the squared Bombieri residual.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PlantArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    nvars: usize,
    /// Bound on the numerators and denominators of drawn coordinates.
    #[arg(long, default_value_t = 4)]
    spread: u32,
    /// Write the planted quartic here.
    #[arg(long = "out-form")]
    out_form: Option<PathBuf>,
    /// Write the planted points here.
    #[arg(long = "out-points")]
    out_points: Option<PathBuf>,
    /// Write the planted representation (points with coefficients) here.
    #[arg(long = "out-rep")]
    out_rep: Option<PathBuf>,
}

struct Outcome {
    code: i32,
    /// Machine payload, routed to `--out` or stdout.
    payload: String,
    /// Human framing, printed to stdout unless `--quiet`.
    framing: Vec<String>,
}

impl Outcome {
    fn new(code: i32, payload: impl Into<String>) -> Self {
        Outcome {
            code,
            payload: payload.into(),
            framing: Vec::new(),
        }
    }

    fn with_framing(mut self, line: impl Into<String>) -> Self {
        self.framing.push(line.into());
        self
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return EXIT_OK;
            }
            let line = err.to_string();
            eprintln!("error: {}", line.lines().next().unwrap_or("invalid arguments"));
            return EXIT_INPUT;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            if !cli.quiet {
                for line in &outcome.framing {
                    println!("{line}");
                }
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &outcome.payload) {
                        eprintln!("error: {e}");
                        return EXIT_INPUT;
                    }
                }
                None => print!("{}", ensure_newline(outcome.payload)),
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_verdict() {
                EXIT_NEGATIVE
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.is_empty() && !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read_form(path: &Path) -> Result<Form> {
    io::parse_form(&fs::read_to_string(path)?)
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Polar { form, point, iterate } => {
            let f = read_form(form)?;
            let p = io::parse_point(point, f.space().argument_role())?;
            let mut result = f;
            for _ in 0..*iterate {
                result = polarity::polar(&result, &p)?;
            }
            Ok(Outcome::new(EXIT_OK, io::serialize_form(&result))
                .with_framing(format!("# polar: {result}")))
        }
        Command::Pair { g, f } => {
            let g = read_form(g)?;
            let f = read_form(f)?;
            let value = polarity::pairing(&g, &f)?;
            Ok(Outcome::new(EXIT_OK, format!("{}\n", rational_to_string(&value))))
        }
        Command::Cat { form, k, basis } => {
            let f = read_form(form)?;
            let cat = polarity::apolarity_matrix(&f, *k)?;
            let mut payload = io::serialize_matrix(cat.entries());
            if *basis {
                let letter_row = f.space().variable_letter();
                let letter_col = f.space().dual().variable_letter();
                payload.push_str(&format!(
                    "# rows: {}\n# cols: {}\n",
                    basis_listing(cat.row_basis(), letter_row),
                    basis_listing(cat.col_basis(), letter_col),
                ));
            }
            Ok(Outcome::new(EXIT_OK, payload)
                .with_framing(format!("# catalecticant of degree-{} polar, rank {}", k, cat.rank())))
        }
        Command::Nondegenerate { form } => {
            let f = read_form(form)?;
            let verdict = polarity::is_nondegenerate(&f)?;
            let code = if verdict { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(code, format!("nondegenerate={verdict}\n")))
        }
        Command::Dual { form } => {
            let f = read_form(form)?;
            match polarity::dual_form(&f)? {
                DualOutcome::Dual(dual) => Ok(Outcome::new(EXIT_OK, io::serialize_form(&dual))
                    .with_framing(format!("# dual form: {dual}"))),
                DualOutcome::Defect(defect) => {
                    let mut payload = String::from("hankel-defect\n");
                    for v in &defect.violations {
                        payload.push_str(&format!(
                            "gamma={} split1={}+{} value1={} split2={}+{} value2={}\n",
                            v.gamma,
                            v.first_split.0,
                            v.first_split.1,
                            rational_to_string(&v.first_value),
                            v.second_split.0,
                            v.second_split.1,
                            rational_to_string(&v.second_value),
                        ));
                    }
                    Ok(Outcome::new(EXIT_NEGATIVE, payload)
                        .with_framing("# inverse catalecticant is not a catalecticant"))
                }
            }
        }
        Command::Biquadric { matrix } => {
            let m = io::parse_matrix(&fs::read_to_string(matrix)?)?;
            match polarity::quartic_from_biquadric(&m)? {
                BiquadricOutcome::Quartic(q) => Ok(Outcome::new(EXIT_OK, io::serialize_form(&q))
                    .with_framing(format!("# quartic: {q}"))),
                BiquadricOutcome::Defect(d) => {
                    let payload = format!(
                        "symmetry-defect\nindex=({},{},{},{}) value={}\nswapped=({},{},{},{}) value={}\n",
                        d.index[0], d.index[1], d.index[2], d.index[3],
                        rational_to_string(&d.lhs),
                        d.swapped[0], d.swapped[1], d.swapped[2], d.swapped[3],
                        rational_to_string(&d.rhs),
                    );
                    Ok(Outcome::new(EXIT_NEGATIVE, payload)
                        .with_framing("# biquadric is not fully symmetric"))
                }
            }
        }
        Command::Vsp(vsp) => dispatch_vsp(vsp),
        Command::Ledger { d, max_d } => ledger_report(*d, *max_d),
    }
}

fn basis_listing(basis: &[crate::form::MultiIndex], letter: char) -> String {
    basis
        .iter()
        .map(|idx| {
            let parts: Vec<String> = idx
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("{letter}{i}") } else { format!("{letter}{i}^{e}") })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch_vsp(command: &VspCommand) -> Result<Outcome> {
    match command {
        VspCommand::Verify { form, rep } => {
            let f = read_form(form)?;
            match io::parse_representation(&fs::read_to_string(rep)?)? {
                io::ParsedRepresentation::Exact(rep) => {
                    let verdict = powersum::verify_representation(&f, &rep)?;
                    let code = if verdict { EXIT_OK } else { EXIT_NEGATIVE };
                    Ok(Outcome::new(code, format!("verified={verdict}\n")))
                }
                io::ParsedRepresentation::Numeric(rep) => {
                    let residual = crate::numeric::verify_representation_numeric(&f, &rep);
                    Ok(Outcome::new(EXIT_OK, format!("residual={residual}\n")))
                }
            }
        }
        VspCommand::Solve { form, points } => {
            let f = read_form(form)?;
            let pts = io::parse_points(&fs::read_to_string(points)?, crate::form::Role::InDual)?;
            match powersum::solve_alphas(&f, &pts, f.degree())? {
                AlphaSolution::Unique { alphas, zero_indices } => {
                    let mut payload = format!(
                        "alphas={}\n",
                        alphas.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
                    );
                    if !zero_indices.is_empty() {
                        payload.push_str(&format!(
                            "zero_indices={}\n",
                            zero_indices.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                        ));
                    }
                    Ok(Outcome::new(EXIT_OK, payload))
                }
                AlphaSolution::Underdetermined { particular, kernel } => {
                    let mut payload = format!(
                        "alphas={}\n",
                        particular.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
                    );
                    payload.push_str(&format!("underdetermined=true\nkernel_dim={}\n", kernel.len()));
                    Ok(Outcome::new(EXIT_OK, payload)
                        .with_framing("# powers are linearly dependent; solution is a particular one"))
                }
                AlphaSolution::NoSolution => {
                    Ok(Outcome::new(EXIT_NEGATIVE, "alphas=none\n".to_string())
                        .with_framing("# form is outside the span of the given powers"))
                }
            }
        }
        VspCommand::Mukai { form, points } => {
            let f = read_form(form)?;
            let pts = io::parse_points(&fs::read_to_string(points)?, crate::form::Role::InDual)?;
            let cert = powersum::mukai_conditions(&f, &pts)?;
            let mut payload = io::serialize_matrix(&cert.eval_matrix);
            payload.push_str(&format!("cond54={}\n", cert.delta_ok));
            match &cert.alphas {
                Some(alphas) if cert.zero_alphas.is_empty() => payload.push_str(&format!(
                    "alphas={}\n",
                    alphas.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
                )),
                Some(alphas) => {
                    payload.push_str(&format!(
                        "alphas={}\n",
                        alphas.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
                    ));
                    payload.push_str(&format!(
                        "zero_indices={}\n",
                        cert.zero_alphas.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    ));
                }
                None => payload.push_str("alphas=none\n"),
            }
            payload.push_str(&format!("cond57={}\n", cert.annihilator_ok));
            payload.push_str(&format!("agree={}\n", cert.agree));
            let code = if cert.member() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::new(code, payload).with_framing(format!(
                "# membership via the delta, coefficient and annihilator routes; annihilator dimension {}",
                cert.annihilator_dim
            )))
        }
        VspCommand::Plant(args) => {
            let instance = powersum::planted_instance(args.seed, args.nvars, args.spread)?;
            if let Some(path) = &args.out_form {
                fs::write(path, io::serialize_form(&instance.form))?;
            }
            if let Some(path) = &args.out_points {
                fs::write(path, io::serialize_points(&instance.points))?;
            }
            if let Some(path) = &args.out_rep {
                let rep = powersum::Representation::new(
                    4,
                    instance
                        .points
                        .iter()
                        .cloned()
                        .zip(instance.alphas.iter().cloned())
                        .collect(),
                )?;
                fs::write(path, io::serialize_representation(&rep))?;
            }
            let mut payload = io::serialize_form(&instance.form);
            payload.push_str("# points\n");
            payload.push_str(&io::serialize_points(&instance.points));
            payload.push_str(&format!(
                "# alphas\n{}\n",
                instance.alphas.iter().map(rational_to_string).collect::<Vec<_>>().join(",")
            ));
            Ok(Outcome::new(EXIT_OK, payload).with_framing(format!(
                "# planted instance: n={} nondegenerate={} squares_independent={} attempts={}",
                instance.points.len(),
                instance.nondegenerate,
                instance.squares_independent,
                instance.attempts
            )))
        }
        VspCommand::Decompose { form, n, restarts, max_iter, tol, seed } => {
            let f = read_form(form)?;
            let config = DecomposeConfig {
                restarts: *restarts,
                max_iter: *max_iter,
                tol: *tol,
                seed: *seed,
            };
            let result = crate::numeric::waring_decompose_numeric(&f, *n, &config);
            match result.status {
                DecomposeStatus::Solved => {
                    let best = &result.solutions[0];
                    let payload = io::serialize_numeric_representation(best);
                    Ok(Outcome::new(EXIT_OK, payload).with_framing(format!(
                        "# {} distinct solution(s); best residual {:e}",
                        result.solutions.len(),
                        best.residual
                    )))
                }
                DecomposeStatus::NoConvergence => Ok(Outcome::new(
                    EXIT_NO_CONVERGENCE,
                    "status=no-convergence\n".to_string(),
                )
                .with_framing("# no restart reached the residual tolerance")),
            }
        }
    }
}

fn ledger_report(d: i64, max_d: Option<i64>) -> Result<Outcome> {
    let report = ledger::invariants(d)?;
    let mut payload = format!("d={} g={} s={} n={}\n", report.d, report.g, report.s, report.n);
    payload.push_str(&format!(
        "dimV={} dimS2={} degH2={} chiDl={}\n",
        report.dim_v, report.dim_s2, report.deg_h2, report.chi_dl
    ));
    payload.push_str(&format!(
        "counts: tri_secant_through_point_of_C={} conics_meeting_line_through_point={} \
         nodes_after_two_line_projection={} nodes_after_bisecant_projection={} \
         conics_decomposition_EC={} conics_decomposition_Ei={}\n",
        report.counts.tri_secant_through_point_of_c,
        report.counts.conics_meeting_line_through_point,
        report.counts.nodes_after_two_line_projection,
        report.counts.nodes_after_bisecant_projection,
        report.counts.conics_decomposition_ec,
        report.counts.conics_decomposition_ei,
    ));
    for caveat in &report.d5_caveats {
        payload.push_str(&format!("# d>=6 only: {caveat}\n"));
    }
    let mut all_pass = true;
    for row in &report.identity_results {
        payload.push_str(&format!(
            "identity {} [{}]: {} = {}\n",
            if row.pass { "pass" } else { "FAIL" },
            row.name,
            row.lhs,
            row.rhs
        ));
        all_pass &= row.pass;
    }
    if let Some(bound) = max_d {
        let sweep = ledger::consistency_check(bound)?;
        for (degree, rows) in &sweep {
            let passed = rows.iter().filter(|r| r.pass).count();
            all_pass &= passed == rows.len();
            payload.push_str(&format!("sweep d={degree} identities={passed}/{}\n", rows.len()));
        }
        payload.push_str(&format!("sweep={}\n", if all_pass { "pass" } else { "FAIL" }));
    }
    let code = if all_pass { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::new(code, payload))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn ledger_payload_contains_golden_line() {
        let outcome = ledger_report(5, None).unwrap();
        assert_eq!(outcome.code, EXIT_OK);
        assert!(outcome.payload.contains("g=3 s=3 n=6"));
        assert!(outcome.payload.contains("# d>=6 only"));
        let outcome6 = ledger_report(6, Some(12)).unwrap();
        assert!(outcome6.payload.contains("g=4 s=6 n=10"));
        assert!(outcome6.payload.contains("degH2=3"));
        assert!(outcome6.payload.contains("sweep=pass"));
    }

    #[test]
    fn ledger_rejects_small_degree() {
        assert!(matches!(ledger_report(4, None), Err(Error::DegreeTooSmall(4))));
    }
}
