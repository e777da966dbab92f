use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use fracvar::fracops::{
    apply_numeric, apply_with_quadrature, sample, trimmed_sup_norm, window, FnRepr, GridFn,
    Interval,
};
use fracvar::lagrangian::{
    el_residual, example_a_lagrangian, example_b_lagrangian, FractionalForm, Trajectory,
};
use fracvar::solutions::{
    classical_constant_map, classical_reference, example_a_solution, example_b_solution,
    ExampleBConstants,
};
use fracvar::varsolve::{assemble_example_b, default_pin_sites, pins_from, solve};
use fracvar::{FracError, FracOrder, Operator, UniformGrid};

use crate::output::{Check, Report, Table};
use crate::{fnspec, CliError, Command, GlobalArgs, Outcome};

/// Validated global configuration.
#[derive(Debug, Clone, Copy)]
pub struct Setup {
    pub alpha: FracOrder,
    pub grid: UniformGrid,
    pub trim: f64,
}

pub fn setup(g: &GlobalArgs) -> Result<Setup, CliError> {
    let alpha = FracOrder::new(g.alpha)?;
    let grid = UniformGrid::new(Interval::new(g.a, g.b)?, g.n)?;
    window(&grid, g.trim)?;
    Ok(Setup {
        alpha,
        grid,
        trim: g.trim,
    })
}

pub fn parse_constants(s: &str) -> Result<ExampleBConstants, CliError> {
    let v = parse_list(s, "constant")?;
    let arr: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| {
        CliError::Config(format!("expected 4 constants, got {}", v.len()))
    })?;
    Ok(ExampleBConstants::from(arr))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| match x.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(CliError::Config(format!("bad {what} `{x}`"))),
        })
        .collect()
}

fn config(g: &GlobalArgs, args: &impl Serialize) -> Value {
    let mut out = serde_json::to_value(g).expect("plain data");
    if let (Value::Object(o), Ok(Value::Object(a))) = (&mut out, serde_json::to_value(args)) {
        o.extend(a);
    }
    out
}

pub fn dispatch(g: &GlobalArgs, cmd: &Command) -> Result<Outcome, CliError> {
    let s = setup(g)?;
    let start = Instant::now();
    let (name, cfg, (checks, table)) = match cmd {
        Command::Op(a) => ("op", config(g, a), op(&s, a)?),
        Command::Example(a) => ("example", config(g, a), example(&s, a)?),
        Command::LimitStudy(a) => ("limit-study", config(g, a), limit_study(&s, a)?),
        Command::Oracle(a) => ("oracle", config(g, a), oracle(&s, a)?),
        Command::Properties(a) => (
            "properties",
            config(g, a),
            (crate::properties::run(g.seed, s.trim)?, None),
        ),
    };
    let report = Report::new(name, cfg, checks, start.elapsed().as_secs_f64());
    Ok(Outcome { report, table })
}

fn nodes(grid: &UniformGrid) -> Vec<f64> {
    grid.nodes().collect()
}

/// Node values with masked nodes replaced by NaN.
fn shown(f: &GridFn) -> Vec<f64> {
    (0..f.values().len())
        .map(|i| f.get(i).unwrap_or(f64::NAN))
        .collect()
}

fn diff(x: &GridFn, y: &GridFn) -> Vec<f64> {
    shown(x)
        .iter()
        .zip(shown(y))
        .map(|(u, v)| (u - v).abs())
        .collect()
}

// ---------------------------------------------------------------- op

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    LeftInt,
    RightInt,
    LeftDeriv,
    RightDeriv,
}

impl OpKind {
    pub fn operator(self) -> Operator {
        match self {
            OpKind::LeftInt => Operator::LeftIntegral,
            OpKind::RightInt => Operator::RightIntegral,
            OpKind::LeftDeriv => Operator::LeftDerivative,
            OpKind::RightDeriv => Operator::RightDerivative,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OpArgs {
    #[arg(long, value_enum)]
    pub kind: OpKind,
    /// Function spec: `const:<c>`, `pow:<left|right>:<coeff>:<exponent>`, `sum:<spec>+<spec>`.
    #[arg(long = "fn", allow_hyphen_values = true)]
    #[serde(rename = "fn")]
    pub function: String,
    /// Threshold on the trimmed sup-norm error.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

fn op(s: &Setup, a: &OpArgs) -> Result<(Vec<Check>, Option<Table>), CliError> {
    let iv = s.grid.interval();
    let f = fnspec::parse(&a.function, iv)?;
    let op = a.kind.operator();
    let exact_input = fnspec::constants_to(&f, op.anchor());
    let analytic = sample(
        &apply_with_quadrature(op, &exact_input.into(), s.alpha, &s.grid)?,
        &s.grid,
    )?;
    let numeric = match apply_numeric(op, &f.sample(&s.grid)?, s.alpha) {
        Err(FracError::SingularAnchor) => {
            return Err(CliError::Config(
                "the grid scheme needs a finite value at the operator's anchoring endpoint".into(),
            ))
        }
        r => r?,
    };
    let err = trimmed_sup_norm(&numeric, &analytic, s.trim)?;
    let table = Table::new(
        ["t", "numeric", "analytic", "abs_error"]
            .map(String::from)
            .to_vec(),
        vec![
            nodes(&s.grid),
            shown(&numeric),
            shown(&analytic),
            diff(&numeric, &analytic),
        ],
    );
    Ok((
        vec![Check::at_most("trimmed_sup_error", err, a.tol)],
        Some(table),
    ))
}

// ---------------------------------------------------------------- example

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub which: Which,
    /// Example A: function spec for q1.
    #[arg(long, default_value = "pow:left:1:0.7", allow_hyphen_values = true)]
    pub q1: String,
    /// Example B: constants C1,C2,C3,C4.
    #[arg(long, default_value = "1,1,1,1", allow_hyphen_values = true)]
    pub c: String,
    /// Threshold on each residual's trimmed sup-norm.
    #[arg(long, default_value_t = 5e-2)]
    pub tol: f64,
}

fn example(s: &Setup, a: &ExampleArgs) -> Result<(Vec<Check>, Option<Table>), CliError> {
    let (q, lag, form) = match a.which {
        Which::A => {
            let q1 = FnRepr::from(fnspec::parse(&a.q1, s.grid.interval())?);
            (
                example_a_solution(&q1, s.alpha, &s.grid)?,
                example_a_lagrangian(),
                FractionalForm::left(s.alpha),
            )
        }
        Which::B => {
            let c = parse_constants(&a.c)?;
            (
                example_b_solution(&c, s.alpha, &s.grid)?,
                example_b_lagrangian(),
                FractionalForm::right(s.alpha),
            )
        }
    };
    let rep = el_residual(&lag, form, &q, s.trim)?;
    let n = q.dim();
    let mut header = vec!["t".to_string()];
    let mut columns = vec![nodes(&s.grid)];
    for (k, c) in q.sampled()?.into_iter().enumerate() {
        header.push(format!("q{}", k + 1));
        columns.push(shown(&c));
    }
    for (k, r) in rep.per_equation.iter().enumerate() {
        header.push(format!("residual{}", k + 1));
        columns.push(shown(r));
    }
    let checks = (0..n)
        .map(|k| {
            Check::at_most(
                format!("residual{}_trimmed_norm", k + 1),
                rep.trimmed_norms[k],
                a.tol,
            )
        })
        .collect();
    Ok((checks, Some(Table::new(header, columns))))
}

// ---------------------------------------------------------------- limit-study

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitArgs {
    /// Orders to visit, in order.
    #[arg(long, default_value = "0.9,0.99,0.999")]
    pub alphas: String,
    #[arg(long, default_value = "1,1,1,1", allow_hyphen_values = true)]
    pub c: String,
    /// Threshold on the distance at the last order.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
}

fn coordinate_distances(x: &Trajectory, y: &Trajectory, trim: f64) -> Result<Vec<f64>, CliError> {
    let (xs, ys) = (x.sampled()?, y.sampled()?);
    Ok(xs
        .iter()
        .zip(&ys)
        .map(|(u, v)| trimmed_sup_norm(u, v, trim))
        .collect::<Result<_, _>>()?)
}

fn limit_study(s: &Setup, a: &LimitArgs) -> Result<(Vec<Check>, Option<Table>), CliError> {
    let iv = s.grid.interval();
    if iv != Interval::unit() {
        return Err(CliError::Config(format!(
            "limit-study runs on [0, 1]; got [{}, {}]",
            iv.a(),
            iv.b()
        )));
    }
    let alphas = parse_list(&a.alphas, "order")?
        .into_iter()
        .map(FracOrder::new)
        .collect::<Result<Vec<_>, _>>()?;
    let c = parse_constants(&a.c)?;
    let reference = classical_reference(&classical_constant_map(&c), &s.grid)?;
    let mut columns = vec![Vec::new(); 6];
    for &alpha in &alphas {
        let d = coordinate_distances(&example_b_solution(&c, alpha, &s.grid)?, &reference, s.trim)?;
        columns[0].push(alpha.value());
        for k in 0..4 {
            columns[k + 1].push(d[k]);
        }
        columns[5].push(d.iter().copied().fold(0.0, f64::max));
    }
    let dmax = &columns[5];
    let mut checks = Vec::new();
    if dmax.len() > 1 {
        let worst = dmax.windows(2).map(|w| w[1] / w[0]).fold(0.0, |m: f64, r| {
            if r.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(r)
            }
        });
        checks.push(Check::below("max_successive_distance_ratio", worst, 1.0));
    }
    let last = *dmax.last().expect("at least one order");
    checks.push(Check::at_most("final_distance", last, a.tol));
    let header = [
        "alpha", "dist_q1", "dist_q2", "dist_q3", "dist_q4", "dist_max",
    ]
    .map(String::from)
    .to_vec();
    Ok((checks, Some(Table::new(header, columns))))
}

// ---------------------------------------------------------------- oracle

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value = "1,1,1,1", allow_hyphen_values = true)]
    pub c: String,
    /// Per-coordinate threshold; defaults to 5h at alpha = 1 and 5e-2 otherwise.
    #[arg(long)]
    pub tol: Option<f64>,
}

fn oracle(s: &Setup, a: &OracleArgs) -> Result<(Vec<Check>, Option<Table>), CliError> {
    let c = parse_constants(&a.c)?;
    let reference = example_b_solution(&c, s.alpha, &s.grid)?;
    let pins = pins_from(&reference, &default_pin_sites(&s.grid))?;
    let solved = solve(&assemble_example_b(s.alpha, &s.grid, pins)?)?;
    let threshold = a.tol.unwrap_or(if s.alpha.value() == 1.0 {
        5.0 * s.grid.step()
    } else {
        5e-2
    });
    let d = coordinate_distances(&solved, &reference, s.trim)?;
    let (rs, ss) = (reference.sampled()?, solved.sampled()?);
    let mut header = vec!["t".to_string()];
    let mut columns = vec![nodes(&s.grid)];
    for k in 0..4 {
        header.push(format!("closed_q{}", k + 1));
        columns.push(shown(&rs[k]));
    }
    for k in 0..4 {
        header.push(format!("solved_q{}", k + 1));
        columns.push(shown(&ss[k]));
    }
    for k in 0..4 {
        header.push(format!("diff_q{}", k + 1));
        columns.push(diff(&ss[k], &rs[k]));
    }
    let checks = (0..4)
        .map(|k| Check::at_most(format!("q{}_trimmed_sup_diff", k + 1), d[k], threshold))
        .collect();
    Ok((checks, Some(Table::new(header, columns))))
}

// ---------------------------------------------------------------- properties

#[derive(Debug, Clone, Args, Serialize)]
pub struct PropertiesArgs {}
