//! Custom planar potentials written as expressions in `x` and `y`.

use evalexpr::{build_operator_tree, ContextWithMutableVariables, HashMapContext, Node, Value};
use trimotion::model::{CustomPotential, PotentialSpec};

use crate::failure::Failure;

fn eval(node: &Node, x: f64, y: f64) -> evalexpr::EvalexprResult<f64> {
    let mut ctx = HashMapContext::new();
    ctx.set_value("x".into(), Value::Float(x))?;
    ctx.set_value("y".into(), Value::Float(y))?;
    node.eval_number_with_context(&ctx)
}

/// Compiles `expression` into a potential callback. Evaluation errors at a
/// point yield NaN.
pub fn compile(name: &str, expression: &str) -> Result<CustomPotential, Failure> {
    let node = build_operator_tree(expression)
        .map_err(|e| Failure::config(format!("custom potential {name}: cannot parse {expression:?}: {e}")))?;
    eval(&node, 1.0, 1.0).map_err(|e| {
        Failure::config(format!(
            "custom potential {name}: {expression:?} does not evaluate at (1, 1): {e}"
        ))
    })?;
    let mut custom = CustomPotential::new(name, move |x, y| eval(&node, x, y).unwrap_or(f64::NAN));
    custom.expression = Some(expression.to_string());
    Ok(custom)
}

/// Gives a deserialized `custom2d` system its callback; other families pass
/// through.
pub fn attach_callback(spec: PotentialSpec) -> Result<PotentialSpec, Failure> {
    match spec {
        PotentialSpec::Custom2D(c) => {
            let expr = c
                .expression
                .as_deref()
                .ok_or_else(|| Failure::config(format!("custom potential {} needs an expression", c.name)))?;
            Ok(PotentialSpec::Custom2D(compile(&c.name, expr)?.with_angular(c.angular)))
        }
        other => Ok(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use trimotion::model::{eval_potential, Point};

    #[test]
    fn evaluates_in_x_and_y() {
        let spec = PotentialSpec::Custom2D(compile("w", "x^2 + 2*y").unwrap());
        assert_eq!(eval_potential(&spec, &Point::planar(3.0, 0.5)).unwrap(), 10.0);
        let zero = PotentialSpec::Custom2D(compile("free", "0").unwrap());
        assert_eq!(eval_potential(&zero, &Point::planar(3.0, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_expressions() {
        assert!(compile("w", "x +").is_err());
        assert!(compile("w", "z * x").is_err());
    }
}
