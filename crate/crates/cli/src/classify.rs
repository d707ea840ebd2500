use chaingeo_core::{AffLine, AlgebraContext, KElement, LElement, Scalar, Trace};

use crate::error::CliError;

/// Parses `"r0;r1"` with comma-separated K entries, e.g. `"1,0,0,0;0,1,0,1"`.
pub fn parse_transversal<F: Scalar>(text: &str) -> Result<Vec<Vec<KElement<F>>>, CliError> {
    text.split(';')
        .map(|row| row.split(',').map(|k| KElement::parse(k.trim()).map_err(CliError::from)).collect())
        .collect()
}

fn short_k<F: Scalar>(k: &KElement<F>) -> String {
    if k.in_z() {
        k.xi.to_string()
    } else {
        k.to_string()
    }
}

pub fn short_l<F: Scalar>(x: &LElement<F>) -> String {
    if x.in_k() {
        short_k(&x.u)
    } else {
        x.to_string()
    }
}

pub fn short_line<F: Scalar>(l: &AffLine<F>) -> String {
    let dir = if *l.direction() == LElement::one() {
        "K".to_string()
    } else if *l.direction() == LElement::i() {
        "iK".to_string()
    } else {
        format!("({})K", short_l(l.direction()))
    };
    if l.offset().is_zero() {
        dir
    } else {
        format!("{} + {dir}", short_l(l.offset()))
    }
}

pub fn classify<F: Scalar>(ctx: &AlgebraContext<F>, text: &str, seed: u64) -> Result<String, CliError> {
    let t = ctx.line(parse_transversal(text)?)?;
    let chain = ctx.chain_from_transversal(&t)?;
    let mut out = match ctx.circle_classify(&chain) {
        Trace::Line(l) => format!("line {}\n", short_line(&l)),
        Trace::Circle(c) => match ctx.regular_points(&c) {
            Ok(pts) => {
                let pts: Vec<String> = pts.iter().map(short_l).collect();
                format!("{}; regular points {}\n", c.kind(), pts.join(", "))
            }
            Err(_) => {
                let inf = ctx.infinity_line();
                let dirs: Vec<String> = ctx
                    .chain_transversals(&chain)
                    .iter()
                    .filter_map(|t| ctx.line_meet(t, &inf).ok().flatten())
                    .map(|p| p.to_string())
                    .collect();
                format!("{}; absolute directions {}\n", c.kind(), dirs.join(", "))
            }
        },
    };
    let ts: Vec<String> = ctx.chain_transversals(&chain).iter().map(|t| t.to_string()).collect();
    out.push_str(&format!("transversals {}\n", ts.join(" | ")));
    let klein = ctx.chain_space(&chain, seed).and_then(|x| ctx.classify_via_klein(&x));
    match klein {
        Ok(k) => out.push_str(&format!("klein model: {k}\n")),
        Err(e) => out.push_str(&format!("klein model: {e}\n")),
    }
    Ok(out)
}
