use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logarr::arrangement::{components, essentialize, render, MultiArrangement};
use logarr::groebner::{GbConfig, OrderKind};
use logarr::lattice::Lattice;
use logarr::logmod::{Engine, LogModule};
use logarr::ratpoly::Polynomial;
use logarr::stpoly::{sample_generic_eta, st_bipoly, st_ideal_for_eta, StIdeal};
use logarr::verify::{file_corpus, paper_corpus, random_corpus, run_suite, Corpus, SuiteOptions};
use logarr::{Error, ErrorCategory};

#[derive(Parser)]
#[command(name = "logarr", version, about = "Logarithmic modules and Solomon-Terao invariants of multiarrangements")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Budget on processed S-pairs per Groebner computation.
    #[arg(long, env = "LOGARR_MAX_PAIRS", default_value_t = 2_000_000, global = true)]
    max_pairs: usize,

    /// Budget on the degree reached by a Groebner computation.
    #[arg(long, env = "LOGARR_MAX_DEGREE", default_value_t = 256, global = true)]
    max_degree: i64,

    /// Budget on draws when searching for a generic form.
    #[arg(long, env = "LOGARR_MAX_ETA_ATTEMPTS", default_value_t = 16, global = true)]
    max_eta_attempts: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
    Random,
    File,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, essentiality, irreducibility and total multiplicity.
    Info { input: String },
    /// Flats by codimension with Moebius values.
    Lattice { input: String },
    /// Characteristic polynomial.
    Chi { input: String },
    /// Generators, Betti table, Hilbert series, reg and pd of D^p or Omega^p.
    Logmod {
        input: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        omega: bool,
    },
    /// Betti tables of D^p (or Omega^p) for every p.
    Betti {
        input: String,
        #[arg(long)]
        omega: bool,
    },
    /// Freeness with exponents and Saito certificate.
    Free { input: String },
    /// Projective dimensions of Omega^p and the tameness verdict.
    Tame { input: String },
    /// Solomon-Terao polynomial of order d+1.
    St {
        input: String,
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// The bi-polynomial Psi(x, t) with f_p, a_p, b_p.
    StBipoly { input: String },
    /// Hilbert function of S / a(A, m, eta).
    StAlgebra {
        input: String,
        /// A form of degree `order` in x1..xl, or `random`.
        #[arg(long, default_value = "random")]
        eta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Number of random arrangements.
        #[arg(long, default_value_t = 60)]
        count: usize,
        /// Restrict to these checks.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Arrangement files for `--suite file`.
        files: Vec<PathBuf>,
    },
    /// Rewrite the arrangement in coordinates where it is essential.
    Essentialize { input: String },
}

fn read_input(input: &str) -> Result<MultiArrangement, Error> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Error::Input(format!("cannot read {input}: {e}")))?
    };
    MultiArrangement::parse(&text)
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
}

fn logmod_text(m: &LogModule) -> String {
    let name = match m.kind {
        logarr::logmod::LogKind::D => "D",
        logarr::logmod::LogKind::Omega => "Omega",
    };
    let mut s = format!("{name}^{} generators:\n", m.p);
    for (g, d) in m.generators.iter().zip(m.degrees()) {
        let parts: Vec<String> = g
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({}) {}", c.render(), m.basis_label(k)))
            .collect();
        s.push_str(&format!("  [deg {d}] {}\n", parts.join(" + ")));
    }
    s.push_str(&format!("Betti table:\n{}", m.betti));
    s.push_str(&format!("Hilbert series: {}\n", m.hilbert.render()));
    s.push_str(&format!("reg = {}\npd = {}\n", m.reg, m.pd));
    s
}

fn ideal_text(ideal: &StIdeal) -> String {
    let mut s = format!("eta = {}\n", ideal.eta.render());
    s.push_str(&format!("attempts = {}\n", ideal.attempts));
    match ideal.colength {
        Some(c) => {
            s.push_str(&format!("colength = {c}\n"));
            s.push_str(&format!("hilbert function = {:?}\n", ideal.hilbert_function));
        }
        None => s.push_str("quotient is not Artinian\n"),
    }
    s
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let config = GbConfig {
        max_pairs: cli.max_pairs,
        max_degree: cli.max_degree,
        order: OrderKind::DegPot,
    };
    let engine = Engine::new(config.clone());
    let fmt = cli.format;
    match cli.command {
        Command::Info { input } => {
            let ma = read_input(&input)?;
            let a = &ma.arrangement;
            let blocks = components(a).len();
            let v = json!({
                "ell": ma.ell(),
                "hyperplanes": a.len(),
                "rank": a.rank(),
                "essential": a.is_essential(),
                "irreducible": blocks <= 1,
                "components": blocks,
                "total_multiplicity": ma.total(),
                "simple": ma.multiplicity.is_simple(),
            });
            let text = format!(
                "ell = {}\nhyperplanes = {}\nrank = {}\nessential = {}\nirreducible = {}\n|m| = {}\n",
                ma.ell(),
                a.len(),
                a.rank(),
                a.is_essential(),
                blocks <= 1,
                ma.total()
            );
            emit(fmt, text, v);
        }
        Command::Lattice { input } => {
            let ma = read_input(&input)?;
            let l = Lattice::new(&ma.arrangement);
            let mut text = String::new();
            for k in 0..=l.rank() {
                text.push_str(&format!("codim {k}:\n"));
                for (f, mu) in l.flats.iter().zip(&l.mu).filter(|(f, _)| f.codim == k) {
                    let members: Vec<String> = f
                        .member_indices()
                        .iter()
                        .map(|&i| ma.arrangement.hyperplanes()[i].to_string())
                        .collect();
                    text.push_str(&format!("  mu = {mu:>3}  {{{}}}\n", members.join(", ")));
                }
            }
            text.push_str(&format!("chi = {}\n", l.characteristic_polynomial().render_with("t")));
            emit(fmt, text, l.to_json());
        }
        Command::Chi { input } => {
            let ma = read_input(&input)?;
            let chi = if ma.multiplicity.is_simple() {
                Lattice::new(&ma.arrangement).characteristic_polynomial()
            } else {
                st_bipoly(&engine, &ma)?.chi()
            };
            emit(fmt, format!("{}\n", chi.render_with("t")), json!({"chi": chi.to_json_terms()}));
        }
        Command::Logmod { input, p, omega } => {
            let ma = read_input(&input)?;
            if p > ma.ell() {
                return Err(Error::Input(format!("order {p} exceeds dimension {}", ma.ell())));
            }
            let m = if omega {
                engine.omega_module(&ma, p)?
            } else {
                (*engine.derivation_module(&ma, p)?).clone()
            };
            emit(fmt, logmod_text(&m), m.to_json());
        }
        Command::Betti { input, omega } => {
            let ma = read_input(&input)?;
            let mut text = String::new();
            let mut tables = Vec::new();
            for p in 0..=ma.ell() {
                let m = if omega {
                    engine.omega_module(&ma, p)?
                } else {
                    (*engine.derivation_module(&ma, p)?).clone()
                };
                let name = if omega { "Omega" } else { "D" };
                text.push_str(&format!("{name}^{p}: pd {} reg {}\n{}", m.pd, m.reg, m.betti));
                let mut t = m.betti.to_json();
                t["p"] = json!(p);
                tables.push(t);
            }
            emit(fmt, text, json!({"kind": if omega { "Omega" } else { "D" }, "tables": tables}));
        }
        Command::Free { input } => {
            let ma = read_input(&input)?;
            let f = engine.freeness(&ma)?;
            let c = f.saito_constant.as_ref().map(|c| c.to_fraction_string());
            let text = if f.free {
                format!(
                    "free\nexponents = {:?}\nsaito constant = {}\n",
                    f.degrees,
                    c.clone().unwrap_or_default()
                )
            } else {
                format!("not free\npd D = {}\ngenerator degrees = {:?}\n", f.pd, f.degrees)
            };
            let v = json!({"free": f.free, "degrees": f.degrees, "pd": f.pd, "saito_constant": c});
            emit(fmt, text, v);
        }
        Command::Tame { input } => {
            let ma = read_input(&input)?;
            let t = engine.tameness(&ma)?;
            let mut text = String::new();
            for (p, d) in t.pd_omega.iter().enumerate() {
                text.push_str(&format!("pd Omega^{p} = {d}\n"));
            }
            text.push_str(if t.tame { "tame\n" } else { "not tame\n" });
            emit(fmt, text, json!({"pd_omega": t.pd_omega, "tame": t.tame}));
        }
        Command::St { input, order } => {
            if order < 2 {
                return Err(Error::Input("order must be at least 2".into()));
            }
            let ma = read_input(&input)?;
            let st = st_bipoly(&engine, &ma)?;
            let poly = st.st_order(order - 1);
            let mut v = st.to_json();
            v["order"] = json!(order);
            v["st"] = json!(poly.to_json_terms());
            v["st_text"] = json!(poly.render_with("x"));
            emit(fmt, format!("{}\n", poly.render_with("x")), v);
        }
        Command::StBipoly { input } => {
            let ma = read_input(&input)?;
            let st = st_bipoly(&engine, &ma)?;
            let mut text = format!("Psi = {}\n", st.psi.render());
            for (p, f) in st.numerators.iter().enumerate() {
                text.push_str(&format!(
                    "f_{p} = {}   a_{p} = {}   b_{p} = {}\n",
                    f.render_with("x"),
                    st.a[p].to_fraction_string(),
                    st.b[p].to_fraction_string()
                ));
            }
            emit(fmt, text, st.to_json());
        }
        Command::StAlgebra {
            input,
            eta,
            seed,
            order,
        } => {
            if order < 2 {
                return Err(Error::Input("order must be at least 2".into()));
            }
            let ma = read_input(&input)?;
            let d1 = engine.derivation_module(&ma, 1)?;
            let ideal = if eta == "random" {
                sample_generic_eta(&d1.generators, ma.ell(), order - 1, seed, cli.max_eta_attempts, &config)?
            } else {
                let e = Polynomial::parse(ma.ell(), &eta)?;
                if e.degree().finite() != Some(order as i64) {
                    return Err(Error::Input(format!("eta must have degree {order}")));
                }
                st_ideal_for_eta(&d1.generators, &e, &config)?
            };
            let st = st_bipoly(&engine, &ma)?.st_order(order - 1);
            let mut text = ideal_text(&ideal);
            text.push_str(&format!("ST coefficients = {:?}\n", st.integer_coeffs().unwrap_or_default()));
            let mut v = ideal.to_json();
            v["seed"] = json!(seed);
            v["order"] = json!(order);
            v["st"] = json!(st.to_json_terms());
            emit(fmt, text, v);
        }
        Command::Verify {
            suite,
            seed,
            json,
            count,
            checks,
            files,
        } => {
            let corpus: Corpus = match suite {
                Suite::Paper => paper_corpus(),
                Suite::Random => random_corpus(seed, count),
                Suite::File => file_corpus(&files)?,
            };
            let options = SuiteOptions {
                seed,
                eta_attempts: cli.max_eta_attempts,
                checks: (!checks.is_empty()).then_some(checks),
                config,
                ..SuiteOptions::default()
            };
            let report = run_suite(&corpus, &options)?;
            let body = serde_json::to_string_pretty(&report.to_json()).expect("json");
            match &json {
                Some(p) if p.as_os_str() == "-" => println!("{body}"),
                Some(p) => std::fs::write(p, format!("{body}\n"))?,
                None => {}
            }
            if fmt == Format::Json && json.is_none() {
                println!("{body}");
            } else if json.as_ref().is_none_or(|p| p.as_os_str() != "-") {
                print!("{}", report.text());
            }
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Essentialize { input } => {
            let ma = read_input(&input)?;
            let (a, m) = essentialize(&ma.arrangement, &ma.multiplicity);
            let text = render(&a, &m);
            emit(fmt, text.clone(), json!({"ell": a.ell(), "arrangement": text}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category_name());
            ExitCode::from(match e.category() {
                ErrorCategory::Input => 2,
                ErrorCategory::Resource => 3,
                ErrorCategory::Check | ErrorCategory::Internal => 1,
            })
        }
    }
}
