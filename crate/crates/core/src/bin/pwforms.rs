//! Batch front end: parse inputs, run computations and checks, emit
//! machine-readable reports on stdout. Exit codes: 0 success, 1 check
//! failure (witness in the report), 2 input error (diagnostic on stderr).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use pwforms::complex::{closed_star_subcomplex, Simplex, SimplicialComplex, StarOpen};
use pwforms::error::Error;
use pwforms::io;
use pwforms::lie::LieAlgebra;
use pwforms::piecewise::{
    extend_from_subcomplex, random_valid_form, section_over, AlgebroidComplex,
};
use pwforms::sheaf::{self, SectionFamily};
use pwforms::{cohomology, rat};

#[derive(Parser)]
#[command(name = "pwforms", about = "Piecewise polynomial forms with Lie algebra coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Betti numbers of the piecewise cochain algebra.
    Cohomology {
        #[arg(short = 'k', value_name = "COMPLEX")]
        complex: PathBuf,
        #[arg(short = 'g', value_name = "LIEALGEBRA")]
        algebra: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Check that a piecewise form file is a compatible family.
    Check {
        form: PathBuf,
        #[arg(short = 'k')]
        complex: PathBuf,
        #[arg(short = 'g')]
        algebra: PathBuf,
    },
    /// Extend a compatible family from a subcomplex to the whole complex.
    Extend {
        form: PathBuf,
        #[arg(short = 'k')]
        complex: PathBuf,
        #[arg(short = 'g')]
        algebra: PathBuf,
        #[arg(long, value_name = "SUBCOMPLEX")]
        sub: PathBuf,
    },
    /// Build and certify a partition of unity subordinate to a star cover.
    Partition {
        #[arg(short = 'k')]
        complex: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Glue sections over a star cover into a global form.
    Glue {
        #[arg(short = 'k')]
        complex: PathBuf,
        #[arg(short = 'g')]
        algebra: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        /// JSON map from member index to a piecewise-form file.
        #[arg(long)]
        sections: PathBuf,
    },
    /// Run the randomized law suite (presheaf, Leibniz, D², round trips).
    Laws {
        #[arg(short = 'k')]
        complex: PathBuf,
        #[arg(short = 'g')]
        algebra: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        file: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, Error> {
    io::parse_complex(&read(path)?, &path.display().to_string())
}

fn load_algebra(path: &Path) -> Result<LieAlgebra, Error> {
    io::parse_lie_algebra(&read(path)?, &path.display().to_string())
}

fn simplex_names(s: &Simplex) -> Vec<String> {
    s.vertices().iter().map(|v| v.name().to_owned()).collect()
}

/// Outcome of a subcommand: a report for stdout plus the exit code.
enum Outcome {
    Pass(String),
    Fail(String),
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Cohomology {
            complex,
            algebra,
            max_degree,
            max_weight,
        } => {
            let k = load_complex(&complex)?;
            let g = load_algebra(&algebra)?;
            let p_max = max_degree.unwrap_or(k.dim() + g.dim());
            let w = max_weight.unwrap_or(p_max as u32 + 2);
            let ac = AlgebroidComplex::new(k, g)?;
            let table = cohomology::betti(&ac, p_max, w);
            if !table.stabilized {
                eprintln!(
                    "warning: weight truncation {w} not stabilized; rerun with a larger --max-weight"
                );
            }
            Ok(Outcome::Pass(io::serialize_betti(&table)))
        }
        Command::Check {
            form,
            complex,
            algebra,
        } => {
            let k = load_complex(&complex)?;
            load_algebra(&algebra)?; // fiber participates only through validation
            let omega =
                io::parse_piecewise_raw(&read(&form)?, &form.display().to_string(), &k)?;
            match omega.validate() {
                Ok(()) => Ok(Outcome::Pass(pretty(json!({"ok": true})))),
                Err(Error::Incompatible {
                    simplex,
                    face,
                    difference,
                }) => Ok(Outcome::Fail(pretty(json!({
                    "ok": false,
                    "witness": {
                        "simplex": simplex_names(&simplex),
                        "face": simplex_names(&face),
                        "difference": difference,
                    }
                })))),
                Err(other) => Err(other),
            }
        }
        Command::Extend {
            form,
            complex,
            algebra,
            sub,
        } => {
            let k = load_complex(&complex)?;
            let g = load_algebra(&algebra)?;
            let l = load_complex(&sub)?;
            let omega_l = io::parse_piecewise(&read(&form)?, &form.display().to_string(), &l)?;
            let ac = AlgebroidComplex::new(k, g)?;
            let extended = extend_from_subcomplex(&ac, &omega_l)?;
            Ok(Outcome::Pass(io::serialize_piecewise(&extended)))
        }
        Command::Partition { complex, cover } => {
            let k = load_complex(&complex)?;
            let cover = io::parse_cover(&read(&cover)?, &cover.display().to_string(), &k)?;
            match sheaf::partition_of_unity(&k, &cover) {
                Ok(p) => {
                    sheaf::certify_partition(&k, &p)?;
                    Ok(Outcome::Pass(pretty(json!({
                        "ok": true,
                        "members": p.functions().len(),
                        "sum_is_one": true,
                        "subordination": true,
                    }))))
                }
                Err(Error::NotACover(s)) => Ok(Outcome::Fail(pretty(json!({
                    "ok": false,
                    "witness": {"uncovered": simplex_names(&s)}
                })))),
                Err(other) => Err(other),
            }
        }
        Command::Glue {
            complex,
            algebra,
            cover,
            sections,
        } => {
            let k = load_complex(&complex)?;
            let g = load_algebra(&algebra)?;
            let cover = io::parse_cover(&read(&cover)?, &cover.display().to_string(), &k)?;
            let map: BTreeMap<usize, PathBuf> = serde_json::from_str(&read(&sections)?)
                .map_err(|e| Error::Parse {
                    file: sections.display().to_string(),
                    message: e.to_string(),
                })?;
            let mut assignments = BTreeMap::new();
            for (i, member) in cover.members().iter().enumerate() {
                let path = map.get(&i).ok_or_else(|| Error::Parse {
                    file: sections.display().to_string(),
                    message: format!("no section file for member {i}"),
                })?;
                let carrier = closed_star_subcomplex(&k, member)?;
                let section =
                    io::parse_piecewise(&read(path)?, &path.display().to_string(), &carrier)?;
                assignments.insert(member.clone(), section);
            }
            let ac = AlgebroidComplex::new(k, g)?;
            match sheaf::check_gluing(&ac, &cover, &SectionFamily::new(assignments)) {
                Ok(glued) => Ok(Outcome::Pass(io::serialize_piecewise(&glued))),
                Err(Error::GluingIncompatible {
                    left,
                    right,
                    simplex,
                    difference,
                }) => Ok(Outcome::Fail(pretty(json!({
                    "ok": false,
                    "witness": {
                        "left": simplex_names(&left),
                        "right": simplex_names(&right),
                        "simplex": simplex_names(&simplex),
                        "difference": difference,
                    }
                })))),
                Err(other) => Err(other),
            }
        }
        Command::Laws {
            complex,
            algebra,
            seed,
        } => {
            let k = load_complex(&complex)?;
            let g = load_algebra(&algebra)?;
            let ac = AlgebroidComplex::new(k, g)?;
            match law_suite(&ac, seed) {
                Ok(counts) => Ok(Outcome::Pass(pretty(json!({
                    "ok": true,
                    "seed": seed,
                    "checks": counts,
                })))),
                Err(witness) => Ok(Outcome::Fail(pretty(json!({
                    "ok": false,
                    "seed": seed,
                    "witness": witness,
                })))),
            }
        }
    }
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable value")
}

/// A random subcomplex: the closure of a random subset of simplices
/// (never empty).
fn random_subcomplex(rng: &mut StdRng, k: &SimplicialComplex) -> SimplicialComplex {
    let all: Vec<&Simplex> = k.simplices().collect();
    let picked: Vec<Simplex> = all
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|s| (*s).clone())
        .collect();
    if picked.is_empty() {
        let i = rng.gen_range(0..all.len());
        return SimplicialComplex::closure(&[all[i].clone()]);
    }
    SimplicialComplex::closure(&picked)
}

fn law_suite(
    ac: &AlgebroidComplex,
    seed: u64,
) -> Result<serde_json::Value, serde_json::Value> {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = ac.base();
    let g = ac.fiber();
    let top = k.dim() + g.dim();

    // D² = 0 and validity preservation
    let d_squared = 30;
    for i in 0..d_squared {
        let degree = rng.gen_range(0..=top);
        let omega = random_valid_form(&mut rng, ac, degree);
        let dd = omega.differential(g).differential(g);
        if !dd.is_zero() {
            return Err(json!({"law": "d_squared", "iteration": i}));
        }
    }
    // Leibniz
    let leibniz = 20;
    for i in 0..leibniz {
        let p = rng.gen_range(0..=top.min(2));
        let q = rng.gen_range(0..=top.min(2));
        let a = random_valid_form(&mut rng, ac, p);
        let b = random_valid_form(&mut rng, ac, q);
        let lhs = match a.wedge(&b) {
            Ok(ab) => ab.differential(g),
            Err(e) => return Err(json!({"law": "leibniz", "error": e.to_string()})),
        };
        let sign = if p % 2 == 0 { rat(1) } else { rat(-1) };
        let rhs = a
            .differential(g)
            .wedge(&b)
            .and_then(|x| Ok(x.add(&a.wedge(&b.differential(g))?.scale(&sign))?));
        match rhs {
            Ok(rhs) if rhs == lhs => {}
            _ => return Err(json!({"law": "leibniz", "iteration": i})),
        }
    }
    // subcomplex chain functoriality
    let chains = 20;
    for i in 0..chains {
        let l = random_subcomplex(&mut rng, k);
        let t = random_subcomplex(&mut rng, &l);
        let degree = rng.gen_range(0..=top.min(2));
        let omega = random_valid_form(&mut rng, ac, degree);
        let via = omega
            .restrict_to_subcomplex(&l)
            .and_then(|r| r.restrict_to_subcomplex(&t));
        let direct = omega.restrict_to_subcomplex(&t);
        match (via, direct) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => return Err(json!({"law": "restriction_composition", "iteration": i})),
        }
    }
    // star chain presheaf laws
    let star_chains = 15;
    let simplices: Vec<&Simplex> = k.simplices().collect();
    for i in 0..star_chains {
        let w_center = simplices[rng.gen_range(0..simplices.len())].clone();
        let faces = w_center.faces();
        let v_center = faces[rng.gen_range(0..faces.len())].clone();
        let u_faces = v_center.faces();
        let u_center = u_faces[rng.gen_range(0..u_faces.len())].clone();
        let (u, v, w) = (
            StarOpen::new(u_center),
            StarOpen::new(v_center),
            StarOpen::new(w_center),
        );
        let degree = rng.gen_range(0..=top.min(2));
        let omega = random_valid_form(&mut rng, ac, degree);
        let section = match section_over(&omega, &u) {
            Ok(s) => s,
            Err(e) => return Err(json!({"law": "section", "error": e.to_string()})),
        };
        if let Err(e) = sheaf::check_presheaf_laws(ac, (&u, &v, &w), &section) {
            return Err(json!({
                "law": "presheaf",
                "iteration": i,
                "violation": e.to_string(),
            }));
        }
    }
    // extension round trips
    let round_trips = 10;
    for i in 0..round_trips {
        let l = random_subcomplex(&mut rng, k);
        let degree = rng.gen_range(0..=top.min(2));
        let omega = random_valid_form(&mut rng, ac, degree);
        let omega_l = match omega.restrict_to_subcomplex(&l) {
            Ok(r) => r,
            Err(e) => return Err(json!({"law": "restrict", "error": e.to_string()})),
        };
        match extend_from_subcomplex(ac, &omega_l) {
            Ok(ext) => {
                if ext.restrict_to_subcomplex(&l).ok() != Some(omega_l) {
                    return Err(json!({"law": "extension_round_trip", "iteration": i}));
                }
            }
            Err(e) => {
                return Err(json!({
                    "law": "extension_round_trip",
                    "iteration": i,
                    "error": e.to_string(),
                }))
            }
        }
    }
    // gluing round trips over the vertex-star cover
    let gluings = 5;
    let cover = pwforms::complex::Cover::new(
        k.vertices()
            .into_iter()
            .map(|v| StarOpen::new(Simplex::new(vec![v]).expect("vertex simplex")))
            .collect(),
    );
    for i in 0..gluings {
        let degree = rng.gen_range(0..=top.min(2));
        let omega = random_valid_form(&mut rng, ac, degree);
        let sections: Result<BTreeMap<_, _>, Error> = cover
            .members()
            .iter()
            .map(|m| Ok((m.clone(), section_over(&omega, m)?)))
            .collect();
        let glued = sections
            .and_then(|s| sheaf::check_gluing(ac, &cover, &SectionFamily::new(s)));
        match glued {
            Ok(glued) if glued == omega => {}
            _ => return Err(json!({"law": "gluing_round_trip", "iteration": i})),
        }
    }
    // partition of unity exactness
    let p = sheaf::partition_of_unity(k, &cover)
        .map_err(|e| json!({"law": "partition", "error": e.to_string()}))?;
    sheaf::certify_partition(k, &p)
        .map_err(|e| json!({"law": "partition", "error": e.to_string()}))?;

    Ok(json!({
        "d_squared": d_squared,
        "leibniz": leibniz,
        "restriction_chains": chains,
        "star_chains": star_chains,
        "extension_round_trips": round_trips,
        "gluing_round_trips": gluings,
        "partition_certified": true,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass(report)) => {
            println!("{report}");
            ExitCode::from(0)
        }
        Ok(Outcome::Fail(report)) => {
            println!("{report}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
