use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankcodes::automorphisms::{
    analytic_order, mat_aut_brute, rm_aut_brute, rm_aut_group, stabilizer_degree, AutGroup, MAT_BRUTE_GUARD,
};
use rankcodes::codes::{compress_code, expand_code, gabidulin, rank_distance, CodeFile, MatrixCode, RankMetricCode};
use rankcodes::equivalence::{are_equivalent, AnyMap, CodeRef, EquivMap, Equivalence, Mode};
use rankcodes::expansion::{compress, expand, IndependentTuple, OrderedBasis};
use rankcodes::subspace::{lift, subspace_distance, unlift, unlift_at, Subspace, SubspaceCode};
use rankcodes::verify::{verify_paper, EXAMPLES};
use rankcodes::{make_tower, FieldTag, Mat, Op, Tower};

#[derive(Parser)]
#[command(name = "rankcodes", version, about = "Rank-metric, matrix and lifted subspace codes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Field spec, e.g. `gf(2,1,4;modulus=[1,1,0,0,1])` or `gf(2,1,4)`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// `power`, `normal`, or a comma-separated element list.
    #[arg(long, global = true, default_value = "power")]
    basis: String,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest set the command may enumerate.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    guard: u128,
}

#[derive(Subcommand)]
enum Verb {
    /// Describe a field, optionally evaluating `a <op> b`.
    Field {
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Build a Gabidulin code; `--g random` draws g from `--seed`.
    Gab {
        #[arg(long)]
        g: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Expand a vector (`--x`) or a rank-metric code (`--code`).
    Expand {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Compress a matrix (`--matrix`) or a matrix code (`--code`).
    Compress {
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Lift a code at the given 1-based pivot columns.
    Lift {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        pivots: String,
    },
    /// Recover the matrix code from a lifted subspace code.
    Unlift {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        pivots: Option<String>,
    },
    /// Rank distance of two vectors or matrices, or subspace distance of row spaces.
    Dist {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        subspace: bool,
    },
    /// Minimum distance of a code file.
    Mindist {
        #[arg(long)]
        code: PathBuf,
    },
    /// Apply a map to a vector, matrix or code.
    Apply {
        #[arg(long)]
        map: String,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// `f` followed by `g`.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Order of a map.
    Order {
        #[arg(long)]
        map: String,
    },
    /// Search for an equivalence map between two codes.
    Equiv {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value = "rm-linear")]
        mode: String,
    },
    /// Automorphism group of a code.
    Aut {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        semilinear: bool,
    },
    /// Recompute a worked example and diff against the stated values.
    VerifyPaper {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

/// Misuse of the command line rather than a mathematical failure.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn tower(common: &Common) -> anyhow::Result<Arc<Tower>> {
    let spec = common.field.as_deref().ok_or_else(|| usage("this command needs --field"))?;
    Ok(Arc::new(parse_field(spec)?))
}

/// Accepts the full spec or the short `gf(p,e,m)` form.
fn parse_field(spec: &str) -> anyhow::Result<Tower> {
    if let Ok(t) = spec.parse::<Tower>() {
        return Ok(t);
    }
    let inner = spec
        .trim()
        .strip_prefix("gf(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| usage(format!("bad field spec `{spec}`")))?;
    let nums: Vec<u32> = inner
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad field spec `{spec}`")))?;
    let [p, e, m] = nums[..] else {
        return Err(usage(format!("bad field spec `{spec}`")));
    };
    Ok(make_tower(p, e, m, None)?)
}

fn read_code(path: &PathBuf) -> anyhow::Result<CodeFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(CodeFile::parse(&text)?)
}

fn read_subspace(path: &PathBuf) -> anyhow::Result<SubspaceCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SubspaceCode::parse(&text)?)
}

fn parse_pivots(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad pivot list `{s}`"))))
        .collect()
}

/// Writes `text` to `--out` (and says so) or prints it.
fn emit(common: &Common, text: &str, out: &mut String) -> anyhow::Result<()> {
    match &common.out {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => out.push_str(text),
    }
    Ok(())
}

fn as_matrix_code(file: &CodeFile, b: &OrderedBasis) -> MatrixCode {
    match file {
        CodeFile::Matrix(c) => c.clone(),
        other => expand_code(other.rank_metric().expect("rank-metric variant"), b),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let c = &cli.common;
    let mut out = String::new();
    let mut status = ExitCode::SUCCESS;
    match &cli.verb {
        Verb::Field { op, a, b } => {
            let t = tower(c)?;
            writeln!(out, "field {t}")?;
            writeln!(out, "p={} e={} m={} q={} size={}", t.p(), t.e(), t.m(), t.q(), t.size())?;
            writeln!(out, "normal element {}", t.fmt_elem(t.find_normal_element()))?;
            if let Some(op) = op {
                let op = match op.as_str() {
                    "add" => Op::Add,
                    "sub" => Op::Sub,
                    "mul" => Op::Mul,
                    "div" => Op::Div,
                    _ => return Err(usage(format!("unknown op `{op}`"))),
                };
                let (Some(a), Some(b)) = (a, b) else {
                    return Err(usage("--op needs --a and --b"));
                };
                let r = t.arith(t.parse_elem(a)?, t.parse_elem(b)?, op)?;
                writeln!(out, "{}", t.fmt_elem(r))?;
            }
        }
        Verb::Gab { g, k, l } => {
            let t = tower(c)?;
            let g = if g == "random" {
                let l = l.ok_or_else(|| usage("--g random needs --l"))?;
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                loop {
                    let v = (0..l).map(|_| t.gen_pow(rng.gen_range(0..t.group_order() as i64))).collect();
                    if let Ok(g) = IndependentTuple::new(&t, v) {
                        break g;
                    }
                }
            } else {
                IndependentTuple::new(&t, t.parse_vector(g)?)?
            };
            let code = gabidulin(t, *k, g)?;
            let d = if code.code().size() <= c.guard {
                code.code().min_rank_distance_with_guard(c.guard)?
            } else {
                code.designed_distance()
            };
            emit(c, &CodeFile::Gabidulin(code).to_text(), &mut out)?;
            writeln!(out, "d_{{R,min}}={d}")?;
        }
        Verb::Expand { x, code } => match (x, code) {
            (Some(x), None) => {
                let t = tower(c)?;
                let b = OrderedBasis::from_name(&t, &c.basis)?;
                let m = expand(&t, &t.parse_vector(x)?, &b);
                writeln!(out, "{}", m.format(&t))?;
            }
            (None, Some(path)) => {
                let file = read_code(path)?;
                let rm = file.rank_metric().ok_or_else(|| usage("expand needs a rank-metric code"))?;
                let b = OrderedBasis::from_name(rm.tower(), &c.basis)?;
                emit(c, &CodeFile::Matrix(expand_code(rm, &b)).to_text(), &mut out)?;
            }
            _ => return Err(usage("give exactly one of --x, --code")),
        },
        Verb::Compress { matrix, code } => match (matrix, code) {
            (Some(m), None) => {
                let t = tower(c)?;
                let b = OrderedBasis::from_name(&t, &c.basis)?;
                let x = compress(&t, &Mat::parse(&t, m, FieldTag::Base)?, &b)?;
                writeln!(out, "{}", t.fmt_vector(&x))?;
            }
            (None, Some(path)) => {
                let CodeFile::Matrix(mc) = read_code(path)? else {
                    return Err(usage("compress needs a matrix code"));
                };
                let b = OrderedBasis::from_name(mc.tower(), &c.basis)?;
                emit(c, &CodeFile::RankMetric(compress_code(&mc, &b)?).to_text(), &mut out)?;
            }
            _ => return Err(usage("give exactly one of --matrix, --code")),
        },
        Verb::Lift { code, pivots } => {
            let file = read_code(code)?;
            let b = OrderedBasis::from_name(file.tower(), &c.basis)?;
            let mc = as_matrix_code(&file, &b);
            let sc = lift(&mc, &parse_pivots(pivots)?, c.guard)?;
            emit(c, &sc.to_text(), &mut out)?;
            writeln!(out, "{} codewords", sc.len())?;
        }
        Verb::Unlift { code, pivots } => {
            let sc = read_subspace(code)?;
            let (piv, mc) = match pivots {
                Some(p) => {
                    let p = parse_pivots(p)?;
                    let mc = unlift_at(&sc, &p)?;
                    (p, mc)
                }
                None => unlift(&sc).context("no common pivot set; pass --pivots")?,
            };
            emit(c, &CodeFile::Matrix(mc).to_text(), &mut out)?;
            let piv: Vec<String> = piv.iter().map(ToString::to_string).collect();
            writeln!(out, "pivots {}", piv.join(","))?;
        }
        Verb::Dist { x, y, a, b, subspace } => {
            let t = tower(c)?;
            match (x, y, a, b) {
                (Some(x), Some(y), None, None) => {
                    let basis = OrderedBasis::from_name(&t, &c.basis)?;
                    let (x, y) = (t.parse_vector(x)?, t.parse_vector(y)?);
                    if x.len() != y.len() {
                        bail!(rankcodes::Error::ShapeMismatch("vectors differ in length".into()));
                    }
                    writeln!(out, "d_R={}", rank_distance(&t, &x, &y, &basis))?;
                }
                (None, None, Some(a), Some(b)) => {
                    let a = Mat::parse(&t, a, FieldTag::Base)?;
                    let b = Mat::parse(&t, b, FieldTag::Base)?;
                    if *subspace {
                        let d = subspace_distance(&t, &Subspace::new(&t, &a), &Subspace::new(&t, &b))?;
                        writeln!(out, "d_S={d}")?;
                    } else {
                        writeln!(out, "d_R={}", a.sub(&t, &b)?.rank(&t))?;
                    }
                }
                _ => return Err(usage("give --x and --y, or --a and --b")),
            }
        }
        Verb::Mindist { code } => {
            let text = fs::read_to_string(code).with_context(|| format!("reading {}", code.display()))?;
            if text.trim_start().starts_with("subspace") {
                let sc = SubspaceCode::parse(&text)?;
                match sc.min_distance()? {
                    Some(d) => writeln!(out, "d_{{S,min}}={d}")?,
                    None => writeln!(out, "d_{{S,min}} undefined for fewer than two codewords")?,
                }
            } else {
                let d = match CodeFile::parse(&text)? {
                    CodeFile::Matrix(mc) => mc.min_rank_distance_with_guard(c.guard)?,
                    other => other.rank_metric().unwrap().min_rank_distance_with_guard(c.guard)?,
                };
                writeln!(out, "d_{{R,min}}={d}")?;
            }
        }
        Verb::Apply { map, x, matrix, code } => {
            let file = code.as_ref().map(read_code).transpose()?;
            let t = match &file {
                Some(f) => f.tower().clone(),
                None => tower(c)?,
            };
            let f = AnyMap::parse(&t, map)?;
            match (&f, x, matrix, file) {
                (AnyMap::Rm(f), Some(x), None, None) => {
                    writeln!(out, "{}", t.fmt_vector(&f.apply(&t, &t.parse_vector(x)?)?))?;
                }
                (AnyMap::Mat(f), None, Some(m), None) => {
                    writeln!(out, "{}", f.apply(&t, &Mat::parse(&t, m, FieldTag::Base)?)?.format(&t))?;
                }
                (AnyMap::Rm(f), None, None, Some(file)) => {
                    let rm = file.rank_metric().ok_or_else(|| usage("rank-metric maps act on rank-metric codes"))?;
                    emit(c, &CodeFile::RankMetric(f.apply_code(rm)?).to_text(), &mut out)?;
                }
                (AnyMap::Mat(f), None, None, Some(file)) => {
                    let b = OrderedBasis::from_name(&t, &c.basis)?;
                    let mc = as_matrix_code(&file, &b);
                    emit(c, &CodeFile::Matrix(f.apply_code(&mc)?).to_text(), &mut out)?;
                }
                _ => return Err(usage("rm maps take --x or --code, mat maps take --matrix or --code")),
            }
        }
        Verb::Compose { f, g } => {
            let t = tower(c)?;
            let h = match (AnyMap::parse(&t, f)?, AnyMap::parse(&t, g)?) {
                (AnyMap::Rm(f), AnyMap::Rm(g)) => f.then(&t, &g).format(&t),
                (AnyMap::Mat(f), AnyMap::Mat(g)) => {
                    if f.shape() != g.shape() {
                        bail!(rankcodes::Error::ShapeMismatch("maps act on different shapes".into()));
                    }
                    f.then(&t, &g).format(&t)
                }
                _ => return Err(usage("cannot compose a rank-metric map with a matrix map")),
            };
            writeln!(out, "{h}")?;
        }
        Verb::Order { map } => {
            let t = tower(c)?;
            let n = match AnyMap::parse(&t, map)? {
                AnyMap::Rm(f) => f.order(&t),
                AnyMap::Mat(f) => f.order(&t),
            };
            writeln!(out, "order {n}")?;
        }
        Verb::Equiv { code, other, mode } => {
            let mode: Mode = mode.parse().map_err(|e: rankcodes::Error| usage(e.to_string()))?;
            let (f1, f2) = (read_code(code)?, read_code(other)?);
            let t = f1.tower().clone();
            let b = OrderedBasis::from_name(&t, &c.basis)?;
            let (m1, m2);
            let (r1, r2) = match mode {
                Mode::RmLinear | Mode::RmSemilinear => (
                    CodeRef::Rm(f1.rank_metric().ok_or_else(|| usage("rm modes need rank-metric codes"))?),
                    CodeRef::Rm(f2.rank_metric().ok_or_else(|| usage("rm modes need rank-metric codes"))?),
                ),
                Mode::MatLinear | Mode::MatSemilinear => {
                    m1 = as_matrix_code(&f1, &b);
                    m2 = as_matrix_code(&f2, &b);
                    (CodeRef::Mat(&m1), CodeRef::Mat(&m2))
                }
            };
            match are_equivalent(r1, r2, mode, c.guard)? {
                Equivalence::Equivalent(f) => writeln!(out, "equivalent via {}", f.format(&t))?,
                Equivalence::NotEquivalent { reason, maps_checked } => {
                    writeln!(out, "not equivalent ({reason}; {maps_checked} maps checked)")?
                }
            }
        }
        Verb::Aut { code, full, oracle, semilinear } => {
            let file = read_code(code)?;
            aut(c, &file, *full, *oracle, *semilinear, &mut out, &mut status)?;
        }
        Verb::VerifyPaper { example, all } => {
            let ids: Vec<&str> = match (example, all) {
                (Some(id), false) => vec![id.as_str()],
                (None, true) => EXAMPLES.to_vec(),
                _ => return Err(usage("give --example <id> or --all")),
            };
            for id in ids {
                let report = verify_paper(id)?;
                writeln!(out, "{report}")?;
                if !report.passed() {
                    status = ExitCode::from(1);
                }
            }
        }
    }
    print!("{out}");
    Ok(status)
}

fn print_group<M: EquivMap>(t: &Tower, g: &AutGroup<M>, full: bool, out: &mut String) -> anyhow::Result<()> {
    writeln!(out, "order {}", g.order())?;
    for f in g.generators() {
        writeln!(out, "generator {}", f.format(t))?;
    }
    if full {
        for f in g.elements() {
            writeln!(out, "{}", f.format(t))?;
        }
    }
    Ok(())
}

fn aut(
    c: &Common,
    file: &CodeFile,
    full: bool,
    oracle: bool,
    semilinear: bool,
    out: &mut String,
    status: &mut ExitCode,
) -> anyhow::Result<()> {
    let t = file.tower().clone();
    match file {
        CodeFile::Gabidulin(gc) if !semilinear && gc.k() < gc.length() => {
            let sd = stabilizer_degree(&t, gc.g());
            let group = rm_aut_group(gc)?;
            writeln!(out, "d={}", sd.d)?;
            print_group(&t, &group, full, out)?;
            if oracle {
                let brute = rm_aut_brute(gc.code(), false, c.guard)?;
                let same = brute.elements() == group.elements();
                debug_assert_eq!(group.order() as u128, analytic_order(t.q() as u64, t.m(), sd.d));
                writeln!(
                    out,
                    "analytic order {}; brute order {}; {}",
                    group.order(),
                    brute.order(),
                    if same { "MATCH" } else { "MISMATCH" }
                )?;
                if !same {
                    *status = ExitCode::from(1);
                }
            }
        }
        CodeFile::Matrix(mc) => {
            if oracle {
                return Err(usage("--oracle needs a Gabidulin code"));
            }
            let guard = c.guard.max(MAT_BRUTE_GUARD);
            print_group(&t, &mat_aut_brute(mc, semilinear, guard)?, full, out)?;
        }
        other => {
            if oracle {
                return Err(usage("--oracle needs a Gabidulin code with k < l"));
            }
            let rm: &RankMetricCode = other.rank_metric().ok_or_else(|| anyhow!("no rank-metric code"))?;
            print_group(&t, &rm_aut_brute(rm, semilinear, c.guard)?, full, out)?;
        }
    }
    Ok(())
}
