//! Browser bindings for the interactive demo page.
//!
//! Three operations are exposed to JavaScript: verifying a candidate
//! against an equation, auditing the bundled examples, and sampling the
//! relative residual over a 2-plane slice of `C^n` for the heatmap. All
//! functions take and return plain strings (JSON for reports) so the
//! page needs no framework; the same functions compile and run natively
//! for testing.

use tripdde::audit::{audit_example, AuditMode, FIXTURES};
use tripdde::complex::cx;
use tripdde::config::parse_equation_config;
use tripdde::equation::OmegaBranch;
use tripdde::parser::parse_expression;
use tripdde::solutions::{construct, solve_xi, Theorem};
use wasm_bindgen::prelude::*;

fn err_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

/// Verify `solution` against `equation` (both in the toolkit's textual
/// formats); returns a JSON report.
#[wasm_bindgen]
pub fn verify(equation: &str, solution: &str, samples: usize, seed: u64) -> String {
    let cfg = match parse_equation_config(equation) {
        Ok(c) => c,
        Err(e) => return err_json(&e.to_string()),
    };
    let tol = cfg.tolerance.unwrap_or_default();
    let eq = cfg.equation;
    let f = match parse_expression(solution, eq.arity) {
        Ok(f) => f,
        Err(e) => return err_json(&e.to_string()),
    };
    let report = eq.verify(&f, samples.max(1), seed, tol, 1e-8);
    serde_json::to_string(&report).unwrap_or_else(|e| err_json(&e.to_string()))
}

/// Audit one bundled example (`id` in 2.1–2.4, `mode` "verbatim" or
/// "constructed"); returns the audit outcome as JSON.
#[wasm_bindgen]
pub fn audit(id: &str, mode: &str) -> String {
    let mode = match mode {
        "verbatim" => AuditMode::Verbatim,
        "constructed" => AuditMode::Constructed,
        other => return err_json(&format!("unknown mode '{other}'")),
    };
    match audit_example(id, mode) {
        Ok(outcome) => serde_json::to_string(&outcome).unwrap_or_else(|e| err_json(&e.to_string())),
        Err(e) => err_json(&e.to_string()),
    }
}

/// The bundled example ids, comma separated.
#[wasm_bindgen]
pub fn example_ids() -> String {
    FIXTURES
        .iter()
        .map(|f| f.id)
        .collect::<Vec<_>>()
        .join(",")
}

/// Equation document of a bundled example.
#[wasm_bindgen]
pub fn example_equation(id: &str) -> String {
    FIXTURES
        .iter()
        .find(|f| f.id == id)
        .map(|f| f.equation.to_string())
        .unwrap_or_default()
}

/// As-printed solution text of a bundled example.
#[wasm_bindgen]
pub fn example_solution(id: &str) -> String {
    FIXTURES
        .iter()
        .find(|f| f.id == id)
        .map(|f| f.verbatim_solution.to_string())
        .unwrap_or_default()
}

/// Construct the verified candidate for a bundled example and return its
/// expression text (JSON with the candidate and notes).
#[wasm_bindgen]
pub fn construct_example(id: &str) -> String {
    match audit_example(id, AuditMode::Constructed) {
        Ok(outcome) => serde_json::json!({
            "candidate": outcome.candidate,
            "pass": outcome.pass,
            "notes": outcome.notes,
        })
        .to_string(),
        Err(e) => err_json(&e.to_string()),
    }
}

/// Construct a single-exponential candidate for a user equation by
/// solving the ξ constraint; tries both branches and returns the first
/// that verifies.
#[wasm_bindgen]
pub fn construct_solution(equation: &str) -> String {
    let cfg = match parse_equation_config(equation) {
        Ok(c) => c,
        Err(e) => return err_json(&e.to_string()),
    };
    let tol = cfg.tolerance.unwrap_or_default();
    let eq = cfg.equation;
    let theorem = match eq.variant {
        tripdde::equation::Variant::Shift => Theorem::T21,
        tripdde::equation::Variant::Difference => Theorem::T22,
    };
    let case = match theorem {
        Theorem::T21 => tripdde::solutions::CaseId::II,
        Theorem::T22 => tripdde::solutions::CaseId::III,
    };
    for branch in [OmegaBranch::Plus, OmegaBranch::Minus] {
        let solved = match solve_xi(&eq, theorem, branch, tol) {
            Ok(s) => s,
            Err(_) => continue,
        };
        for &root in &solved.roots {
            let mut params = tripdde::solutions::CaseParameters::new(theorem, case);
            params.branch = branch;
            params.xi = Some(root);
            if let Ok((cand, report)) = construct(&eq, &params, tol) {
                if cand.equation.verify_symbolic(&cand.f, tol) {
                    return serde_json::json!({
                        "candidate": tripdde::parser::format_expression(&cand.f),
                        "constraints_ok": report.required_satisfied(),
                        "xi": [root.re, root.im],
                    })
                    .to_string();
                }
            }
        }
    }
    err_json("no single-exponential family candidate verifies for this equation")
}

/// Sample `log10(|residual(z)| / (1 + |e^{g(z)}|))` on a `resolution ×
/// resolution` grid of the plane `Re(z_i) × Re(z_j)` in `[-span, span]²`
/// (all other coordinates 0). Returns the grid row-major; points where
/// evaluation overflows are `NaN`.
#[wasm_bindgen]
pub fn residual_grid(equation: &str, solution: &str, resolution: usize, span: f64) -> Vec<f64> {
    let resolution = resolution.clamp(2, 512);
    let cfg = match parse_equation_config(equation) {
        Ok(c) => c,
        Err(_) => return Vec::new(),
    };
    let eq = cfg.equation;
    let f = match parse_expression(solution, eq.arity) {
        Ok(f) => f,
        Err(_) => return Vec::new(),
    };
    let residual = eq.residual(&f);
    let rhs = eq.rhs();
    let mut grid = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let y = -span + 2.0 * span * (row as f64) / (resolution as f64 - 1.0);
        for col in 0..resolution {
            let x = -span + 2.0 * span * (col as f64) / (resolution as f64 - 1.0);
            let mut point = vec![cx(0.0, 0.0); eq.arity];
            point[eq.i] = cx(x, 0.0);
            point[eq.j] = cx(y, 0.0);
            let value = match (residual.eval(&point), rhs.eval(&point)) {
                (Ok(r), Ok(v)) => (r.norm() / (1.0 + v.norm())).max(1e-300).log10(),
                _ => f64::NAN,
            };
            grid.push(value);
        }
    }
    grid
}

/// Library version, for the page footer.
#[wasm_bindgen]
pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_reports_json() {
        let eq = example_equation("2.1");
        let constructed: serde_json::Value =
            serde_json::from_str(&construct_example("2.1")).unwrap();
        assert_eq!(constructed["pass"], true);
        let candidate = constructed["candidate"].as_str().unwrap();
        let report: serde_json::Value =
            serde_json::from_str(&verify(&eq, candidate, 50, 0)).unwrap();
        assert_eq!(report["symbolic_zero"], true);
        assert!(report["max_rel_residual"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn audit_round_trips_ids() {
        for id in example_ids().split(',') {
            let doc: serde_json::Value = serde_json::from_str(&audit(id, "verbatim")).unwrap();
            assert_eq!(doc["id"], id);
        }
        let bad: serde_json::Value = serde_json::from_str(&audit("9.9", "verbatim")).unwrap();
        assert!(bad["error"].is_string());
    }

    #[test]
    fn construct_solution_on_first_example() {
        let doc: serde_json::Value =
            serde_json::from_str(&construct_solution(&example_equation("2.1"))).unwrap();
        assert_eq!(doc["constraints_ok"], true);
    }

    #[test]
    fn residual_grid_shape_and_content() {
        let eq = example_equation("2.1");
        let constructed: serde_json::Value =
            serde_json::from_str(&construct_example("2.1")).unwrap();
        let candidate = constructed["candidate"].as_str().unwrap();
        let grid = residual_grid(&eq, candidate, 16, 1.0);
        assert_eq!(grid.len(), 256);
        // A verified solution's residual is tiny everywhere on the grid.
        assert!(grid.iter().all(|v| v.is_nan() || *v < -8.0));
        // The as-printed form is visibly wrong on the same grid.
        let bad = residual_grid(&eq, &example_solution("2.1"), 16, 1.0);
        assert!(bad.iter().any(|v| *v > -3.0));
    }

    #[test]
    fn errors_are_json() {
        let doc: serde_json::Value =
            serde_json::from_str(&verify("nonsense", "z1", 10, 0)).unwrap();
        assert!(doc["error"].is_string());
    }
}
