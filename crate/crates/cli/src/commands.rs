use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use valtree::classify::{classify_with_depth, Form};
use valtree::oracle::{verify_classification, verify_tree, TreeReport};
use valtree::render::to_view;
use valtree::solve::{default_bound, solve_exact_with_budget, table_row};
use valtree::{
    predicted_solution_form, ramanujan_recursion, to_ascii, to_dot, Exponent, Limits, Nat, Poly,
    RenderStyle, SolveOutcome, TreeKind, ValuationTree,
};

use crate::output::{csv_text, envelope, to_value, unsupported, CliError, Format, Outcome, Status};

pub fn tree(
    poly: Poly,
    limits: Limits,
    refine_bounds: bool,
    format: Format,
) -> Result<Outcome, CliError> {
    let tree = ValuationTree::build(poly, limits)?;
    let style = RenderStyle {
        refine_bounds,
        ..RenderStyle::default()
    };
    if tree.is_truncated() {
        eprintln!(
            "note: node budget of {} reached; tree truncated at depth {}",
            limits.max_nodes,
            tree.depth()
        );
    }
    let truncation = |prefix: &str| {
        if tree.is_truncated() {
            format!("{prefix} truncated: node budget {} reached\n", limits.max_nodes)
        } else {
            String::new()
        }
    };
    let payload = match format {
        Format::Text => to_ascii(&tree, &style) + &truncation("#"),
        Format::Dot => to_dot(&tree, &style) + &truncation("//"),
        Format::Json => {
            let vs = tree.valuation_set();
            envelope(
                "tree",
                json!({
                    "exponent": poly.exponent(),
                    "constant": to_value(&poly.constant())?,
                    "depth": limits.max_depth,
                    "max_nodes": limits.max_nodes,
                    "refine_bounds": refine_bounds,
                }),
                json!({
                    "depth": tree.depth(),
                    "nodes": tree.len(),
                    "truncated": tree.is_truncated(),
                    "resolved": tree.is_resolved(),
                    "achieved": vs.achieved,
                    "frontier": to_value(&vs.frontier)?,
                    "root": to_value(&to_view(&tree, &style))?,
                }),
            )
        }
        Format::Csv => return Err(unsupported("tree", format)),
    };
    Ok(Outcome::ok(payload))
}

fn describe_form(form: &Form) -> String {
    match *form {
        Form::QuadraticInfinite { k, j } => format!("D = 2^(2k) (8j + 7) with k = {k}, j = {j}"),
        Form::QuadraticFinite => "D is not of the form 2^(2k) (8j + 7)".into(),
        Form::CubicInfinite { k, j } => format!("D = 2^(3k) (2j + 1) with k = {k}, j = {j}"),
        Form::CubicTwiceOdd { j } => format!("D = 2 (2j + 1) with j = {j}"),
        Form::CubicFourTimesOdd { j } => format!("D = 4 (2j + 1) with j = {j}"),
        Form::CubicPurePower { k, i } => format!("D = 2^(3k + i) with k = {k}, i = {i}"),
        Form::CubicMixed { k, i, odd_part } => {
            format!("D = 2^(3k + i) m with k = {k}, i = {i}, m = {odd_part} (no closed form)")
        }
    }
}

fn join(values: impl IntoIterator<Item = u32>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn classify(poly: Poly, depth: u32, format: Format) -> Result<Outcome, CliError> {
    let class = classify_with_depth(&poly, depth)?;
    let payload = match format {
        Format::Json => envelope(
            "classify",
            json!({
                "exponent": poly.exponent(),
                "constant": to_value(&poly.constant())?,
                "depth": depth,
            }),
            json!({
                "classification": to_value(&class)?,
                "c_range_display": class.c_range.to_string(),
            }),
        ),
        Format::Text => {
            let range = &class.c_range;
            let certainty = to_value(&range.certainty)?;
            let mut text = format!(
                "{poly}: {} tree\nnormal form: D = 2^{} * {}\nform: {}\nc-range: {} ({})\n",
                class.kind,
                class.normal_form.two_exponent,
                class.normal_form.odd_part,
                describe_form(&class.form),
                range,
                certainty.as_str().unwrap_or_default(),
            );
            if !range.excluded.is_empty() {
                text += &format!("excluded: {{{}}}\n", join(range.excluded.iter().copied()));
            }
            if let Some(depth) = range.depth {
                text += &format!("tree depth: {depth}\n");
            }
            text
        }
        Format::Csv | Format::Dot => return Err(unsupported("classify", format)),
    };
    Ok(Outcome::ok(payload))
}

pub fn solve(
    poly: Poly,
    c: u32,
    bound: Option<Nat>,
    max_nodes: usize,
    format: Format,
) -> Result<Outcome, CliError> {
    let bound = bound.unwrap_or_else(|| default_bound(c));
    let outcome = solve_exact_with_budget(&poly, c, bound, max_nodes)?;
    let predicted = predicted_solution_form(&poly, c);
    let payload = match format {
        Format::Json => envelope(
            "solve",
            json!({
                "exponent": poly.exponent(),
                "constant": to_value(&poly.constant())?,
                "c": c,
                "bound": to_value(&bound)?,
            }),
            json!({
                "outcome": to_value(&outcome)?,
                "predicted_form": to_value(&predicted)?,
            }),
        ),
        Format::Text => match outcome {
            SolveOutcome::Found(s) => format!(
                "{s}\nfamily: x ≡ {} (mod {})\n",
                s.family.residue,
                s.family.modulus()
            ),
            SolveOutcome::ProvenAbsent => format!(
                "proven absent: {} = 2^{c} y has no solution with y odd\n",
                poly
            ),
        },
        Format::Csv => {
            let rows = outcome.solution().map(|s| {
                vec![
                    s.x.to_string(),
                    s.y.to_string(),
                    s.c.to_string(),
                    s.family.residue.to_string(),
                    s.family.level.to_string(),
                ]
            });
            csv_text(&["x", "y", "c", "residue", "level"], rows)?
        }
        Format::Dot => return Err(unsupported("solve", format)),
    };
    Ok(Outcome::ok(payload))
}

pub fn recursion_table(c_max: u32, format: Format) -> Result<Outcome, CliError> {
    if c_max < 3 {
        return Err(CliError::Usage("--c-max must be at least 3".into()));
    }
    let states = ramanujan_recursion(c_max)?;
    let payload = match format {
        Format::Csv => csv_text(
            &["c", "x_c", "y_c"],
            states
                .iter()
                .map(|s| vec![s.c.to_string(), s.x.to_string(), s.y.to_string()]),
        )?,
        Format::Text => {
            let mut text = String::from("c | x_c | y_c\n");
            for s in &states {
                text += &format!("{} | {} | {}\n", s.c, s.x, s.y);
            }
            text
        }
        Format::Json => envelope(
            "table",
            json!({ "exponent": 2, "constant": 7, "recursion": true, "c_max": c_max }),
            to_value(&states)?,
        ),
        Format::Dot => return Err(unsupported("table", format)),
    };
    Ok(Outcome::ok(payload))
}

pub struct TableArgs {
    pub exponent: Exponent,
    pub d_from: Nat,
    pub d_to: Nat,
    pub include_infinite: bool,
    pub depth: u32,
}

pub fn table(args: TableArgs, format: Format) -> Result<Outcome, CliError> {
    if args.d_from == 0 || args.d_from > args.d_to {
        return Err(CliError::Usage(format!(
            "empty or invalid range {}..={}",
            args.d_from, args.d_to
        )));
    }
    let rows = (args.d_from..=args.d_to)
        .map(|d| Poly::new(args.exponent, d))
        .filter(|p| {
            p.as_ref()
                .map_or(true, |p| args.include_infinite || valtree::tree_kind(p) == TreeKind::Finite)
        })
        .map(|p| table_row(&p?, args.depth))
        .collect::<Result<Vec<_>, _>>()?;
    let payload = match format {
        Format::Csv => csv_text(
            &["D", "c", "solutions"],
            rows.iter().map(|r| {
                vec![
                    r.constant.to_string(),
                    r.c_column(),
                    r.solutions_column(" "),
                ]
            }),
        )?,
        Format::Text => {
            let mut text = String::from("D | c | (x,y,c)\n");
            for r in &rows {
                text += &format!("{} | {} | {}\n", r.constant, r.c_column(), r.solutions_column(", "));
            }
            text
        }
        Format::Json => envelope(
            "table",
            json!({
                "exponent": args.exponent,
                "d_from": to_value(&args.d_from)?,
                "d_to": to_value(&args.d_to)?,
                "include_infinite": args.include_infinite,
                "depth": args.depth,
            }),
            to_value(&rows)?,
        ),
        Format::Dot => return Err(unsupported("table", format)),
    };
    Ok(Outcome::ok(payload))
}

#[derive(Serialize)]
struct TreeSummary {
    constant: Nat,
    checked: u64,
    violations: usize,
}

pub fn verify(
    exponent: Exponent,
    d_max: Nat,
    depth: u32,
    x_max: Nat,
    format: Format,
) -> Result<Outcome, CliError> {
    let classification = verify_classification(exponent, d_max, depth)?;
    let reports: Vec<TreeReport> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let tree = ValuationTree::build(Poly::new(exponent, d)?, Limits::depth(depth))?;
            verify_tree(&tree, x_max)
        })
        .collect::<Result<_, _>>()?;
    let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    let status = if violations == 0 && classification.is_clean() {
        Status::Success
    } else {
        Status::Violations
    };
    let payload = match format {
        Format::Text => {
            let mut text = format!(
                "verify x^{exponent} + D for 1 <= D <= {d_max}, depth {depth}, x <= {x_max}\n\
                 classification: {} checked, {} mismatches\n\
                 trees: {} checked, {checked} values, {violations} violations\n",
                classification.entries.len(),
                classification.mismatches.len(),
                reports.len(),
            );
            for d in &classification.mismatches {
                text += &format!("mismatch: D = {d}\n");
            }
            for r in &reports {
                for v in &r.violations {
                    text += &format!(
                        "violation: D = {} x = {} class {} predicted {:?} actual {}\n",
                        r.poly.constant(),
                        v.x,
                        v.class,
                        v.predicted,
                        v.actual
                    );
                }
            }
            text
        }
        Format::Json => {
            let summaries: Vec<TreeSummary> = reports
                .iter()
                .map(|r| TreeSummary {
                    constant: r.poly.constant(),
                    checked: r.checked,
                    violations: r.violations.len(),
                })
                .collect();
            let all_violations: Vec<_> = reports
                .iter()
                .flat_map(|r| r.violations.iter().map(move |v| (r.poly.constant(), *v)))
                .collect();
            envelope(
                "verify",
                json!({
                    "exponent": exponent,
                    "d_max": to_value(&d_max)?,
                    "depth": depth,
                    "x_max": to_value(&x_max)?,
                }),
                json!({
                    "clean": status == Status::Success,
                    "classification": to_value(&classification)?,
                    "trees": to_value(&summaries)?,
                    "violations": to_value(&all_violations)?,
                    "values_checked": checked,
                }),
            )
        }
        Format::Csv | Format::Dot => return Err(unsupported("verify", format)),
    };
    Ok(Outcome { payload, status })
}
