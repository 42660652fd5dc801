//! The `algcircuit v1` text format.
//!
//! ```text
//! algcircuit v1
//! modulus integer        ; or: modulus 10007
//! xvars 2
//! fvars 1
//! %0 = x1
//! %1 = f1
//! %2 = mul %0 %1
//! %3 = lin 1*%2 -1*%0
//! out %3
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, Domain, Node, NodeId, VarId};
use crate::field::Prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line {0:?}")]
    MissingHeader(&'static str),
    #[error("circuit has no output")]
    NoOutput,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn parse_ref(tok: &str, n: usize, line: usize) -> Result<NodeId, FormatError> {
    let id: u32 = tok
        .strip_prefix('%')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| syntax(line, format!("bad node reference {tok:?}")))?;
    if id as usize >= n {
        return Err(syntax(line, format!("reference {tok} does not precede its use")));
    }
    Ok(NodeId(id))
}

fn parse_var(tok: &str) -> Option<VarId> {
    let idx = |s: &str| s.parse::<u32>().ok().filter(|&i| i >= 1);
    if let Some(r) = tok.strip_prefix('x') {
        idx(r).map(VarId::X)
    } else {
        idx(tok.strip_prefix('f')?).map(VarId::F)
    }
}

/// Parses one circuit. Node ids must be `%0, %1, ...` in file order.
pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut c = Circuit::new();
    let mut seen_magic = false;
    let (mut xdecl, mut fdecl) = (0u32, 0u32);
    let mut outputs = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split(';').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !seen_magic {
            if toks != ["algcircuit", "v1"] {
                return Err(FormatError::MissingHeader("algcircuit v1"));
            }
            seen_magic = true;
            continue;
        }
        match toks[0] {
            "modulus" if toks.len() == 2 => {
                let d = if toks[1] == "integer" {
                    Domain::Integer
                } else {
                    let p: u64 = toks[1].parse().map_err(|_| syntax(line, "bad modulus"))?;
                    Domain::Prime(Prime::new(p).map_err(|e| syntax(line, e.to_string()))?)
                };
                c.set_domain(d);
            }
            "xvars" if toks.len() == 2 => {
                xdecl = toks[1].parse().map_err(|_| syntax(line, "bad xvars"))?;
            }
            "fvars" if toks.len() == 2 => {
                fdecl = toks[1].parse().map_err(|_| syntax(line, "bad fvars"))?;
            }
            "out" if toks.len() == 2 => outputs.push(parse_ref(toks[1], c.len(), line)?),
            t if t.starts_with('%') => {
                let want = format!("%{}", c.len());
                if t != want || toks.get(1) != Some(&"=") || toks.len() < 3 {
                    return Err(syntax(line, format!("expected `{want} = ...`")));
                }
                let n = c.len();
                let args = &toks[3..];
                let node = match toks[2] {
                    "const" if args.len() == 1 => {
                        Node::Const(args[0].parse().map_err(|_| syntax(line, "bad constant"))?)
                    }
                    "lin" if !args.is_empty() => {
                        let mut ts = Vec::with_capacity(args.len());
                        for a in args {
                            let (k, r) = a.split_once('*').ok_or_else(|| syntax(line, format!("bad term {a:?}")))?;
                            let k: i64 = k.parse().map_err(|_| syntax(line, format!("bad coefficient {k:?}")))?;
                            ts.push((k, parse_ref(r, n, line)?));
                        }
                        Node::Lin(ts)
                    }
                    "mul" if !args.is_empty() => {
                        Node::Mul(args.iter().map(|a| parse_ref(a, n, line)).collect::<Result<_, _>>()?)
                    }
                    "div" if args.len() == 2 => Node::Div(parse_ref(args[0], n, line)?, parse_ref(args[1], n, line)?),
                    v if args.is_empty() => {
                        Node::Var(parse_var(v).ok_or_else(|| syntax(line, format!("unknown node {v:?}")))?)
                    }
                    other => return Err(syntax(line, format!("malformed {other:?} node"))),
                };
                c.push(node);
            }
            other => return Err(syntax(line, format!("unexpected {other:?}"))),
        }
    }
    if !seen_magic {
        return Err(FormatError::MissingHeader("algcircuit v1"));
    }
    if outputs.is_empty() {
        return Err(FormatError::NoOutput);
    }
    c.set_outputs(outputs);
    c.set_xvars(xdecl);
    c.set_fvars(fdecl);
    Ok(c)
}

/// Writes a circuit; `parse_circuit(&write_circuit(c)) == c`.
pub fn write_circuit(c: &Circuit) -> String {
    let mut s = String::from("algcircuit v1\n");
    match c.domain() {
        Domain::Integer => s.push_str("modulus integer\n"),
        Domain::Prime(p) => writeln!(s, "modulus {p}").unwrap(),
    }
    writeln!(s, "xvars {}\nfvars {}", c.xvars(), c.fvars()).unwrap();
    for (i, node) in c.nodes().iter().enumerate() {
        write!(s, "%{i} = ").unwrap();
        match node {
            Node::Const(v) => write!(s, "const {v}"),
            Node::Var(v) => write!(s, "{v}"),
            Node::Lin(ts) => {
                s.push_str("lin");
                ts.iter().try_for_each(|(k, ch)| write!(s, " {k}*{ch}"))
            }
            Node::Mul(cs) => {
                s.push_str("mul");
                cs.iter().try_for_each(|ch| write!(s, " {ch}"))
            }
            Node::Div(a, b) => write!(s, "div {a} {b}"),
        }
        .unwrap();
        s.push('\n');
    }
    for o in c.outputs() {
        writeln!(s, "out {o}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "\
algcircuit v1
modulus integer
xvars 2
fvars 1
%0 = x1
%1 = f1
%2 = mul %0 %1
%3 = const 1
%4 = x2
%5 = div %3 %4
%6 = lin 1*%2 -1*%5
out %6
";

    #[test]
    fn golden_round_trip_is_bit_exact() {
        let c = parse_circuit(GOLDEN).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.node(NodeId(6)), &Node::Lin(vec![(1, NodeId(2)), (-1, NodeId(5))]));
        assert_eq!(write_circuit(&c), GOLDEN);
    }

    #[test]
    fn comments_and_declared_widths() {
        let text = "; leading comment\nalgcircuit v1\nmodulus 7 ; F_7\nxvars 5\nfvars 3\n\n%0 = x1\nout %0\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!((c.xvars(), c.fvars()), (5, 3));
        assert_eq!(c.domain(), Domain::Prime(Prime::new(7).unwrap()));
        assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(parse_circuit("%0 = x1\nout %0\n"), Err(FormatError::MissingHeader("algcircuit v1")));
        assert!(matches!(
            parse_circuit("algcircuit v1\n%0 = mul %0\nout %0\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_circuit("algcircuit v1\n%1 = x1\nout %1\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_circuit("algcircuit v1\n%0 = y1\nout %0\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_circuit("algcircuit v1\nmodulus 8\n"), Err(FormatError::Syntax { .. })));
        assert_eq!(parse_circuit("algcircuit v1\n%0 = x1\n"), Err(FormatError::NoOutput));
    }
}
