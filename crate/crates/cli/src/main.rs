//! `goppa` — build, transform, and verify binary Goppa codes.
//!
//! Subcommands:
//!   build       construct a Goppa code and report its parameters
//!   derive      apply a pipeline of transformations to a base code
//!   verify      rebuild catalog entries and check every claim
//!   field-info  describe a binary extension field
//!   wd          enumerate the weight distribution of a generator file
//!
//! Exit codes: 0 success; 1 verification failure; 2 configuration error;
//! 3 enumeration refused (parameters reported without a distance).

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use goppa_core::catalog::{parse_modulus, Catalog, CheckStatus, VerificationReport};
use goppa_core::code::CodeError;
use goppa_core::field::{default_modulus, gf2_poly_string};
use goppa_core::goppa::max_support;
use goppa_core::{
    BitMatrix, CodeRecord, DerivationRegistry, DerivationStep, EnumOptions, FieldElement,
    FieldSpec, GoppaSpec, LinearCode, Polynomial,
};

#[derive(Parser)]
#[command(
    name = "goppa",
    version,
    about = "Construct, transform, and verify binary Goppa codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Goppa code and print its record.
    Build(BuildArgs),
    /// Apply a derivation pipeline to a base code.
    Derive(DeriveArgs),
    /// Rebuild catalog entries and check every claimed parameter.
    Verify(VerifyArgs),
    /// Describe a binary extension field.
    FieldInfo(FieldInfoArgs),
    /// Enumerate the weight distribution of a generator matrix file.
    Wd(WdArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct FieldArgs {
    /// Extension degree m of the field F_2^m.
    #[arg(long)]
    m: u32,
    /// Irreducible modulus, hex (0x...) or decimal.  Defaults are built in
    /// for m = 8 (0x11D) and m = 6 (0x5B).
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FieldSpec>, String> {
        let modulus = match &self.modulus {
            Some(text) => parse_modulus(text).map_err(|e| e.to_string())?,
            None => default_modulus(self.m)
                .ok_or_else(|| format!("no default modulus for m = {}; pass --modulus", self.m))?,
        };
        FieldSpec::new(self.m, modulus).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct EnumArgs {
    /// Refuse enumeration when the dimension exceeds this limit.
    #[arg(long, default_value_t = 28)]
    enum_limit: usize,
    /// Lane-split exponent: enumerate in 2^b parallel lanes (0..=12).
    #[arg(long, env = "GOPPA_LANE_EXP", default_value_t = 0,
          value_parser = clap::value_parser!(u32).range(0..=12))]
    lane_exp: u32,
}

impl EnumArgs {
    fn options(&self) -> EnumOptions {
        EnumOptions {
            limit: self.enum_limit,
            lane_exp: self.lane_exp,
        }
    }
}

#[derive(Args)]
struct GoppaArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Goppa polynomial, e.g. "(x^17+1)^6" or "x^2 + 0x13*x + 1".
    #[arg(long)]
    goppa_poly: String,
    /// File of support elements (one per line, hex or decimal); default is
    /// the maximal support: every field element that is not a root.
    #[arg(long)]
    support_file: Option<String>,
}

impl GoppaArgs {
    fn build(&self) -> Result<GoppaSpec, String> {
        let field = self.field.build()?;
        let g = Polynomial::parse(&field, &self.goppa_poly).map_err(|e| e.to_string())?;
        let support = match &self.support_file {
            None => max_support(&g).map_err(|e| e.to_string())?,
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read support file {path}: {e}"))?;
                parse_support(&field, &text)?
            }
        };
        GoppaSpec::new(g, support).map_err(|e| e.to_string())
    }

    fn describe(&self) -> String {
        let support = match &self.support_file {
            None => "maximal".to_owned(),
            Some(path) => format!("file:{path}"),
        };
        format!(
            "goppa(m={}, g={}, support={support})",
            self.field.m, self.goppa_poly
        )
    }
}

fn parse_support(field: &Arc<FieldSpec>, text: &str) -> Result<Vec<FieldElement>, String> {
    let mut support = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let value =
            parse_modulus(line).map_err(|_| format!("support line {}: bad element", idx + 1))?;
        let element = field
            .element(value)
            .map_err(|e| format!("support line {}: {e}", idx + 1))?;
        support.push(element);
    }
    Ok(support)
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    goppa: GoppaArgs,
    #[command(flatten)]
    enumeration: EnumArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the generator matrix to this file (text format).
    #[arg(long)]
    generator_out: Option<String>,
}

#[derive(Args)]
struct DeriveArgs {
    /// Generator matrix file of the base code (text format).  Mutually
    /// exclusive with the Goppa construction flags.
    #[arg(long, conflicts_with_all = ["m", "modulus", "goppa_poly", "support_file"])]
    generator: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    goppa_poly: Option<String>,
    #[arg(long)]
    support_file: Option<String>,
    /// JSON file holding the list of derivation steps.
    #[arg(long)]
    steps: String,
    #[command(flatten)]
    enumeration: EnumArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the final generator matrix to this file (text format).
    #[arg(long)]
    generator_out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Catalog ids to verify (e.g. goppa-239 punct-238).
    ids: Vec<String>,
    /// Verify every entry small enough to enumerate.
    #[arg(long, conflicts_with = "ids")]
    all_enumerable: bool,
    /// Verify against this catalog file instead of the embedded one.
    #[arg(long)]
    catalog: Option<String>,
    #[command(flatten)]
    enumeration: EnumArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct FieldInfoArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct WdArgs {
    /// Generator matrix file (text format).
    #[arg(long)]
    generator: String,
    #[command(flatten)]
    enumeration: EnumArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => cmd_build(&args),
        Command::Derive(args) => cmd_derive(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::FieldInfo(args) => cmd_field_info(&args),
        Command::Wd(args) => cmd_wd(&args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Enumerate if the dimension permits and emit the record; exit 3 when the
/// distance had to be left uncertified.
fn emit_code(
    code: &LinearCode,
    provenance: &str,
    opts: &EnumOptions,
    format: Format,
) -> Result<ExitCode, String> {
    match code.enumerate(opts) {
        Ok(enumeration) => {
            let record = CodeRecord::certified(code, &enumeration.distribution, provenance);
            print_record(&record, &Some(enumeration.distribution), format);
            Ok(ExitCode::SUCCESS)
        }
        Err(CodeError::EnumerationRefused { .. }) => {
            let record = CodeRecord::uncertified(code, provenance);
            print_record(&record, &None, format);
            Ok(ExitCode::from(3))
        }
        Err(other) => Err(other.to_string()),
    }
}

fn print_record(
    record: &CodeRecord,
    distribution: &Option<goppa_core::WeightDistribution>,
    format: Format,
) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string(record).expect("record serializes")
            );
        }
        Format::Text => {
            match record.d {
                Some(d) => println!("[{},{},{}]", record.n, record.k, d),
                None => println!("[{},{}] (distance not certified)", record.n, record.k),
            }
            if let Some(dist) = distribution {
                println!("W(x,y) = {}", dist.render_enumerator());
            }
            println!("provenance: {}", record.provenance);
        }
    }
}

fn write_generator(path: &Option<String>, code: &LinearCode) -> Result<(), String> {
    if let Some(path) = path {
        fs::write(path, code.generator().to_text())
            .map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    Ok(())
}

fn cmd_build(args: &BuildArgs) -> Result<ExitCode, String> {
    let spec = args.goppa.build()?;
    let code = spec.build_code();
    write_generator(&args.generator_out, &code)?;
    emit_code(
        &code,
        &args.goppa.describe(),
        &args.enumeration.options(),
        args.format,
    )
}

fn cmd_derive(args: &DeriveArgs) -> Result<ExitCode, String> {
    let (base, base_desc) = match &args.generator {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read generator file {path}: {e}"))?;
            let matrix = BitMatrix::from_text(&text).map_err(|e| e.to_string())?;
            (
                LinearCode::from_generator(&matrix),
                format!("generator:{path}"),
            )
        }
        None => {
            let goppa = GoppaArgs {
                field: FieldArgs {
                    m: args.m.ok_or("pass either --generator or --m/--goppa-poly")?,
                    modulus: args.modulus.clone(),
                },
                goppa_poly: args
                    .goppa_poly
                    .clone()
                    .ok_or("--goppa-poly is required when building the base code")?,
                support_file: args.support_file.clone(),
            };
            (goppa.build()?.build_code(), goppa.describe())
        }
    };

    let steps_text = fs::read_to_string(&args.steps)
        .map_err(|e| format!("cannot read steps file {}: {e}", args.steps))?;
    let steps: Vec<DerivationStep> =
        serde_json::from_str(&steps_text).map_err(|e| format!("steps file: {e}"))?;

    let opts = args.enumeration.options();
    let registry = DerivationRegistry::standard();
    let (code, trace) = registry
        .apply_steps(&base, &steps, &opts)
        .map_err(|e| e.to_string())?;
    write_generator(&args.generator_out, &code)?;

    match args.format {
        Format::Json => {
            // Keep stdout a single clean record; the trace goes to stderr.
            for entry in &trace {
                eprintln!("{entry}");
            }
        }
        Format::Text => {
            for entry in &trace {
                println!("{entry}");
            }
        }
    }
    let provenance = format!(
        "{base_desc} | {}",
        trace
            .iter()
            .map(|t| t.step.clone())
            .collect::<Vec<_>>()
            .join(" ; ")
    );
    emit_code(&code, &provenance, &opts, args.format)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, String> {
    let owned;
    let catalog: &Catalog = match &args.catalog {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read catalog file {path}: {e}"))?;
            owned = Catalog::from_json(&text).map_err(|e| e.to_string())?;
            &owned
        }
        None => Catalog::embedded(),
    };
    let opts = args.enumeration.options();
    let report = if args.all_enumerable {
        catalog.verify_enumerable(&opts)
    } else if args.ids.is_empty() {
        return Err("pass catalog ids or --all-enumerable".to_owned());
    } else {
        catalog.verify_ids(&args.ids, &opts).map_err(|e| e.to_string())?
    };

    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        ),
        Format::Text => print_report_table(&report),
    }
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn print_report_table(report: &VerificationReport) {
    let mut passed = 0;
    for entry in &report.reports {
        let params = match entry.measured {
            Some((n, k, Some(d))) => format!("[{n},{k},{d}]"),
            Some((n, k, None)) => format!("[{n},{k},-]"),
            None => "-".to_owned(),
        };
        let status = if entry.passed() {
            passed += 1;
            "PASS".to_owned()
        } else if let Some(error) = &entry.error {
            format!("FAIL ({error})")
        } else {
            let detail = entry
                .checks
                .iter()
                .filter_map(|c| match &c.status {
                    CheckStatus::Mismatch { expected, actual } => {
                        Some(format!("{}: expected {expected}, got {actual}", c.field))
                    }
                    _ => None,
                })
                .collect::<Vec<_>>()
                .join("; ");
            format!("FAIL ({detail})")
        };
        println!("{:<18} {:<14} {status}", entry.id, params);
    }
    println!(
        "{} entries: {} PASS, {} FAIL",
        report.reports.len(),
        passed,
        report.reports.len() - passed
    );
}

fn cmd_field_info(args: &FieldInfoArgs) -> Result<ExitCode, String> {
    let field = args.field.build()?;
    match args.format {
        Format::Json => {
            let info = serde_json::json!({
                "m": field.degree(),
                "size": field.size(),
                "modulus": format!("{:#x}", field.modulus()),
                "modulus_poly": gf2_poly_string(field.modulus()),
                "generator": format!("{:#x}", field.primitive_element().0),
                "multiplicative_order": field.order(),
            });
            println!("{info}");
        }
        Format::Text => {
            println!("F_2^{}: {} elements", field.degree(), field.size());
            println!(
                "modulus: {:#x} = {}",
                field.modulus(),
                gf2_poly_string(field.modulus())
            );
            println!(
                "generator: {:#x} (multiplicative order {})",
                field.primitive_element().0,
                field.order()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_wd(args: &WdArgs) -> Result<ExitCode, String> {
    let text = fs::read_to_string(&args.generator)
        .map_err(|e| format!("cannot read generator file {}: {e}", args.generator))?;
    let matrix = BitMatrix::from_text(&text).map_err(|e| e.to_string())?;
    let code = LinearCode::from_generator(&matrix);
    emit_code(
        &code,
        &format!("generator:{}", args.generator),
        &args.enumeration.options(),
        args.format,
    )
}
