use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hochschild::algebra::{builtin_algebra, BuiltinAlgebra, CommutativeAlgebra, SymmetricBimodule};
use hochschild::field::{Field, FieldDescriptor, Gf, Rationals};
use hochschild::format::{read_simplicial_set, AlgebraText, ModuleText};
use hochschild::homology::{cohomology_dims, homology_dims, HomologyTable};
use hochschild::loday::{chain_complex_from_simplicial_set, dimension_string, DEFAULT_CAP};
use hochschild::sphere::{arity, max_degree_under_cap, SphereComplexSpec, sphere_complex};
use hochschild::structures::cohomology_complex;
use hochschild::structures::hypercube::{boundary_count, position_count};
use hochschild::verify::{run_battery, Battery, Corruption};
use hochschild::Error;

/// Higher order Hochschild homology and cohomology over spheres.
#[derive(Debug, Parser)]
#[command(name = "hochschild", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Sphere dimension d.
    #[arg(long = "sphere", global = true, default_value_t = 1)]
    d: usize,

    /// `builtin:<name>` (truncated_poly:m, product_field:r, group_z2) or `file:PATH`.
    #[arg(long, global = true, default_value = "builtin:truncated_poly:2")]
    algebra: String,

    /// `regular` or `file:PATH`.
    #[arg(long, global = true, default_value = "regular")]
    module: String,

    /// `gfp:P` or `rational`; defaults to the algebra file's field, else gfp:101.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Highest degree to compute.
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// Largest chain group dimension allowed.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Fault injection for `verify`: delta or phi.
    #[arg(long, global = true)]
    corrupt: Option<String>,

    /// Basis elements per (i, n) in the main-theorem check of `verify`.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Homology of M ⊗ A^{⊗C(n,d)} with ∂ = Σ (−1)^i d_i^*.
    Homology,
    /// Cohomology of Hom(A^{⊗C(n,d)}, M).
    Cohomology,
    /// Run the property battery.
    Verify,
    /// Cell and position counts per level.
    Describe,
    /// Homology of ℒ(A,M) over a pointed simplicial set read from a file.
    Loday { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

enum Failure {
    Error(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(name)) => {
            eprintln!("verification failed: {name}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeCap { .. } => 3,
                _ => 2,
            })
        }
    }
}

enum AlgebraSource {
    Builtin(BuiltinAlgebra),
    File(AlgebraText),
}

fn algebra_source(spec: &str) -> Result<AlgebraSource, Error> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        Ok(AlgebraSource::Builtin(name.parse()?))
    } else if let Some(path) = spec.strip_prefix("file:") {
        Ok(AlgebraSource::File(AlgebraText::read(path.as_ref())?))
    } else {
        Err(Error::Argument(format!("algebra must be `builtin:<name>` or `file:PATH`, got `{spec}`")))
    }
}

fn field_descriptor(cli: &Cli, source: &AlgebraSource) -> Result<FieldDescriptor, Error> {
    let flag = cli.field.as_deref().map(str::parse::<FieldDescriptor>).transpose()?;
    match (flag, source) {
        (Some(f), AlgebraSource::File(t)) if f != t.field => Err(Error::Argument(format!(
            "--field {f} conflicts with the algebra file's field {}",
            t.field
        ))),
        (Some(f), _) => Ok(f),
        (None, AlgebraSource::File(t)) => Ok(t.field),
        (None, AlgebraSource::Builtin(_)) => Ok(FieldDescriptor::default()),
    }
}

fn load<F: Field>(
    cli: &Cli,
    field: &F,
    source: &AlgebraSource,
) -> Result<(CommutativeAlgebra<F>, SymmetricBimodule<F>), Error> {
    let (alg, module) = match source {
        AlgebraSource::Builtin(which) => {
            let b = builtin_algebra(*which, field)?;
            if let Some(w) = &b.warning {
                eprintln!("warning: {w}");
            }
            (b.algebra, b.module)
        }
        AlgebraSource::File(text) => {
            let alg = text.algebra(field)?;
            let module = text.module(&alg)?;
            (alg, module)
        }
    };
    let module = match cli.module.as_str() {
        "regular" => module,
        other => match other.strip_prefix("file:") {
            Some(path) => ModuleText::read(path.as_ref(), alg.dim())?.build(&alg)?,
            None => return Err(Error::Argument(format!("module must be `regular` or `file:PATH`, got `{other}`"))),
        },
    };
    Ok((alg, module))
}

fn default_nmax(d: usize, module_dim: usize, alg_dim: usize, cap: usize) -> usize {
    match d {
        1 => 8,
        2 => 6,
        3 => 4,
        _ => max_degree_under_cap(d, module_dim, alg_dim, cap),
    }
}

fn check_config(cli: &Cli) -> Result<(), Error> {
    if cli.d == 0 {
        return Err(Error::Argument("--sphere must be at least 1".into()));
    }
    if cli.cap == 0 {
        return Err(Error::Argument("--cap must be at least 1".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    check_config(cli)?;
    if let Command::Verify = cli.command {
        return verify(cli);
    }
    let source = algebra_source(&cli.algebra)?;
    match field_descriptor(cli, &source)? {
        FieldDescriptor::Prime(p) => compute(cli, &Gf::new(p)?, &source),
        FieldDescriptor::Rational => compute(cli, &Rationals, &source),
    }
}

fn verify(cli: &Cli) -> Result<(), Failure> {
    let field = match cli.field.as_deref().map(str::parse::<FieldDescriptor>).transpose()? {
        None => Gf::default(),
        Some(FieldDescriptor::Prime(p)) => Gf::new(p)?,
        Some(FieldDescriptor::Rational) => {
            return Err(Error::Argument("verify runs over a prime field".into()).into());
        }
    };
    let corruption = match &cli.corrupt {
        Some(c) => c.parse::<Corruption>()?,
        None => Corruption::None,
    };
    let n_max = cli.nmax.unwrap_or_else(|| default_nmax(cli.d, 2, 2, cli.cap));
    let battery = Battery { corruption, samples: cli.samples, field, ..Battery::new(cli.d, n_max) };
    let report = run_battery(&battery)?;
    print!("{report}");
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Verify(c.name.clone())),
    }
}

fn compute<F: Field>(cli: &Cli, field: &F, source: &AlgebraSource) -> Result<(), Failure> {
    let (alg, module) = load(cli, field, source)?;
    let d = cli.d;
    match &cli.command {
        Command::Homology => {
            let n_max = cli.nmax.unwrap_or_else(|| default_nmax(d, module.dim(), alg.dim(), cli.cap));
            let spec = SphereComplexSpec::new(d, alg, module, n_max)?.with_cap(cli.cap);
            let table = homology_dims(&sphere_complex(&spec)?)?;
            emit(cli, &table);
        }
        Command::Cohomology => {
            let n_max = cli.nmax.unwrap_or_else(|| default_nmax(d, module.dim(), alg.dim(), cli.cap));
            let table = cohomology_dims(&cohomology_complex(d, &alg, &module, n_max, cli.cap)?)?;
            emit(cli, &table);
        }
        Command::Describe => {
            let n_max = cli.nmax.unwrap_or_else(|| default_nmax(d, module.dim(), alg.dim(), cli.cap));
            describe(cli, d, n_max, module.dim(), alg.dim());
        }
        Command::Loday { file } => {
            let x = read_simplicial_set(file)?;
            let n_max = cli.nmax.unwrap_or(x.max_level());
            let complex = chain_complex_from_simplicial_set(&x, &alg, &module, n_max, cli.cap)?;
            emit(cli, &homology_dims(&complex)?);
        }
        Command::Verify => unreachable!("handled before loading an algebra"),
    }
    Ok(())
}

fn emit(cli: &Cli, table: &HomologyTable) {
    match cli.format {
        Format::Table => print!("{table}"),
        Format::Records => {
            for r in &table.rows {
                println!(
                    "degree={} dim={} rank_out={} rank_in={} homology={} exact={}",
                    r.degree, r.dim, r.rank_out, r.rank_in, r.homology, r.exact
                );
            }
        }
    }
}

fn describe(cli: &Cli, d: usize, n_max: usize, module_dim: usize, alg_dim: usize) {
    if cli.format == Format::Table {
        println!("{:>3}  {:>8}  {:>14}  {:>12}  {:>12}", "n", "|X_n|", "dim C_n", "|B_n pos|", "|A_n pos|");
    }
    for n in 0..=n_max {
        let cells = 1 + arity(d, n);
        let dim = dimension_string(module_dim, alg_dim, arity(d, n));
        let (b, a) = (position_count(d, n), boundary_count(d, n));
        match cli.format {
            Format::Table => println!("{n:>3}  {cells:>8}  {dim:>14}  {b:>12}  {a:>12}"),
            Format::Records => println!("degree={n} cells={cells} dim={dim} b_positions={b} a_positions={a}"),
        }
    }
}
