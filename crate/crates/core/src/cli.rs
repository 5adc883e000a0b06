//! The `disc` command line.
//!
//! Exit codes: 0 on success, 1 on data or validation failures, 2 on usage
//! errors.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chardata::{bundled_charset, load_tables, parse_charset, CharTables, HanChar};
use crate::error::Error;
use crate::evalkit::{
    align, corpus_edits, evaluate, read_corpus, read_hypotheses, seen_pair_stats,
};
use crate::fusion::{
    self, build_matrix, confusion_set, confusion_set_from_tables, write_confusion_tsv,
    CachedSimilarity, Scorer, SimilarityMatrix, SimilarityParams, DEFAULT_ALPHA, DEFAULT_BETA,
    DEFAULT_CONFUSION_THRESHOLD, DEFAULT_STORE_FLOOR,
};
use crate::intervention::correct_stream;

#[derive(Debug, Parser)]
#[command(
    name = "disc",
    version,
    about = "Character-similarity decoding intervention for Chinese spelling check"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Directory holding pinyin.tsv, fourcorner.tsv, decomp.tsv and strokes.tsv [default: bundled tables]
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,

    /// Weight of the similarity term
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,

    /// Phonetic share of the fused similarity
    #[arg(long, global = true, default_value_t = DEFAULT_BETA)]
    pub beta: f64,

    /// Amount subtracted from the source character's probability (0.1 enables copy punishment)
    #[arg(long, global = true, default_value_t = 0.0)]
    pub copy_penalty: f64,

    /// Confusion threshold; pairs must score strictly above it
    #[arg(long, global = true, default_value_t = DEFAULT_CONFUSION_THRESHOLD)]
    pub threshold: f64,

    /// Print machine-readable JSON instead of a table [default: off]
    #[arg(long, global = true, default_value_t = false)]
    pub json: bool,

    /// Include scored candidates in correction output [default: off]
    #[arg(long, global = true, default_value_t = false)]
    pub trace: bool,
}

impl GlobalOpts {
    fn params(&self) -> SimilarityParams {
        SimilarityParams {
            alpha: self.alpha,
            beta: self.beta,
            copy_penalty: self.copy_penalty,
            confusion_threshold: self.threshold,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the fused similarity of two characters and every component
    Sim { first: String, second: String },
    /// Precompute similarity neighborhoods over a charset
    Matrix {
        /// One character per line [default: bundled charset]
        #[arg(long)]
        charset: Option<PathBuf>,
        /// Minimum score kept in the cache
        #[arg(long, default_value_t = DEFAULT_STORE_FLOOR)]
        floor: f64,
        /// Output TSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the confusion set of a charset
    Confuse {
        /// One character per line [default: bundled charset]
        #[arg(long)]
        charset: Option<PathBuf>,
        /// Read scores from a matrix cache [default: compute from tables]
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Output TSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correct sentences from candidate-distribution JSONL
    Correct {
        /// Interchange JSONL [default: stdin]
        #[arg(long)]
        input: Option<PathBuf>,
        /// Corrected JSONL [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Matrix cache used for lookups; missing pairs are computed exactly [default: compute from tables]
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Sentence-level detection/correction P, R, F1 and FPR
    Eval {
        /// Corpus TSV: <id>\t<source>\t<target>
        #[arg(long)]
        corpus: PathBuf,
        /// Correction JSONL or <id>\t<hypothesis> TSV
        #[arg(long)]
        hyp: PathBuf,
    },
    /// Share of test edit pairs already seen in training data
    Stats {
        /// Training corpus TSV
        #[arg(long)]
        train: PathBuf,
        /// Test corpus TSV
        #[arg(long)]
        test: PathBuf,
    },
}

/// Errors carry the exit code they map to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(m) => Failure::Usage(m),
            e => Failure::Data(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(Error::Io(e))
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    match dispatch(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn tables(opts: &GlobalOpts) -> CliResult<CharTables> {
    let Some(dir) = &opts.data_dir else {
        return Ok(CharTables::bundled());
    };
    let t = load_tables(dir)?;
    for w in t.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(t)
}

fn one_char(arg: &str) -> CliResult<char> {
    let mut it = arg.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Failure::Usage(format!(
            "expected a single character, got {arg:?}"
        ))),
    }
}

fn open_input(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))
}

fn charset(path: Option<&Path>) -> CliResult<Vec<HanChar>> {
    match path {
        None => Ok(bundled_charset()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read charset {}: {e}", p.display())))?;
            Ok(parse_charset(&text)?)
        }
    }
}

fn output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult {
    let opts = &cli.global;
    opts.params().validate()?;
    match &cli.command {
        Command::Sim { first, second } => cmd_sim(opts, first, second, stdout),
        Command::Matrix {
            charset: cs,
            floor,
            out,
        } => {
            let t = tables(opts)?;
            let cs = charset(cs.as_deref())?;
            if !(0.0..=1.0).contains(floor) {
                return Err(Failure::Usage(format!(
                    "floor must be in [0, 1], got {floor}"
                )));
            }
            let m = build_matrix(&t, &cs, opts.beta, *floor)?;
            let mut w = output(out.as_deref(), stdout)?;
            m.write_tsv(&mut w)?;
            w.flush()?;
            let evaluated = cs.len() * (cs.len() - 1) / 2;
            eprintln!("evaluated {evaluated} pairs, stored {}", m.pair_count());
            Ok(())
        }
        Command::Confuse {
            charset: cs,
            matrix,
            out,
        } => {
            let pairs = match matrix {
                Some(path) => {
                    let m = SimilarityMatrix::read_tsv(open_input(path)?)?;
                    confusion_set(&m, opts.threshold)?
                }
                None => {
                    let t = tables(opts)?;
                    let cs = charset(cs.as_deref())?;
                    confusion_set_from_tables(&t, &cs, opts.beta, opts.threshold)?
                }
            };
            let mut w = output(out.as_deref(), stdout)?;
            write_confusion_tsv(&pairs, opts.beta, opts.threshold, &mut w)?;
            w.flush()?;
            eprintln!("{} confusable pairs above {}", pairs.len(), opts.threshold);
            Ok(())
        }
        Command::Correct { input, out, matrix } => {
            let t = tables(opts)?;
            let params = opts.params();
            let reader: Box<dyn BufRead> = match input {
                Some(p) => Box::new(open_input(p)?),
                None => Box::new(BufReader::new(io::stdin())),
            };
            let mut w = output(out.as_deref(), stdout)?;
            let stats = match matrix {
                Some(path) => {
                    let m = SimilarityMatrix::read_tsv(open_input(path)?)?;
                    if (m.beta() - opts.beta).abs() > 1e-12 {
                        return Err(Failure::Usage(format!(
                            "matrix was built with beta {}, but --beta is {}",
                            m.beta(),
                            opts.beta
                        )));
                    }
                    let provider = CachedSimilarity::new(&m, &t)?;
                    correct_stream(reader, &mut w, &params, &provider, opts.trace)?
                }
                None => {
                    let chars: Vec<char> = t.characters().iter().map(|c| c.as_char()).collect();
                    let provider = Scorer::new(&t, opts.beta, chars)?;
                    correct_stream(reader, &mut w, &params, &provider, opts.trace)?
                }
            };
            eprintln!(
                "corrected {} sentences, {} changed, {} substitutions",
                stats.sentences, stats.changed, stats.substitutions
            );
            Ok(())
        }
        Command::Eval { corpus, hyp } => {
            let corpus = read_corpus(open_input(corpus)?)?;
            let hyps = read_hypotheses(open_input(hyp)?)?;
            let report = evaluate(&align(&corpus, &hyps)?);
            if opts.json {
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&report).expect("report serializes")
                )?;
            } else {
                writeln!(stdout, "{report}")?;
            }
            Ok(())
        }
        Command::Stats { train, test } => {
            let train = read_corpus(open_input(train)?)?;
            let test = read_corpus(open_input(test)?)?;
            let seen = corpus_edits(&train)
                .into_iter()
                .map(|e| (e.src, e.tgt))
                .collect();
            let stats = seen_pair_stats(&seen, &corpus_edits(&test));
            if opts.json {
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&stats).expect("stats serialize")
                )?;
            } else {
                writeln!(stdout, "{stats}")?;
            }
            Ok(())
        }
    }
}

fn cmd_sim(opts: &GlobalOpts, first: &str, second: &str, stdout: &mut dyn Write) -> CliResult {
    let (a, b) = (one_char(first)?, one_char(second)?);
    let t = tables(opts)?;
    let r = fusion::breakdown(&t, a, b, opts.beta)?;
    let rows = [
        ("phonetic", r.phonetic.value()),
        ("glyph.four_corner", r.glyph.four_corner.value()),
        ("glyph.structure", r.glyph.structure.value()),
        ("glyph.stroke_edit", r.glyph.stroke_edit.value()),
        ("glyph.stroke_lcs", r.glyph.stroke_lcs.value()),
        ("glyph", r.glyph_mean.value()),
        ("fused", r.fused.value()),
    ];
    if opts.json {
        let mut obj = serde_json::Map::new();
        obj.insert("first".into(), json!(a.to_string()));
        obj.insert("second".into(), json!(b.to_string()));
        obj.insert("beta".into(), json!(opts.beta));
        for (k, v) in rows {
            obj.insert(k.into(), json!(v));
        }
        writeln!(stdout, "{}", serde_json::Value::Object(obj))?;
    } else {
        writeln!(stdout, "{a} {b} beta={}", opts.beta)?;
        for (k, v) in rows {
            writeln!(stdout, "{k:<18} {v:.4}")?;
        }
    }
    Ok(())
}
