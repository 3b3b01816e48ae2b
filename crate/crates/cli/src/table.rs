//! Fixed-width rendering of the JSON reports. Strings are printed verbatim,
//! so rationals appear exactly as in the JSON output.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn is_row_list(xs: &[Value]) -> bool {
    !xs.is_empty() && xs.iter().all(Value::is_array)
}

fn aligned(rows: &[Vec<String>], indent: &str, out: &mut Vec<String>) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push(format!("{indent}{}", line.join("  ")));
    }
}

pub fn render(v: &Value) -> String {
    let Value::Object(obj) = v else {
        return cell(v);
    };
    let key_width = obj.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = Vec::new();
    for (k, x) in obj {
        match x {
            Value::Array(xs) if is_row_list(xs) => {
                out.push(format!("{k}:"));
                let rows: Vec<Vec<String>> = xs
                    .iter()
                    .map(|r| r.as_array().unwrap().iter().map(cell).collect())
                    .collect();
                aligned(&rows, "  ", &mut out);
            }
            Value::Object(_) => {
                out.push(format!("{k}:"));
                out.extend(render(x).lines().map(|l| format!("  {l}")));
            }
            other => out.push(format!("{k:<key_width$}  {}", cell(other))),
        }
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalar_fields_line_up() {
        let t = render(&json!({"breaks": ["1/2"], "slopes": ["4", "1"]}));
        assert_eq!(t, "breaks  1/2\nslopes  4 1");
    }

    #[test]
    fn row_lists_are_right_aligned() {
        let t = render(&json!({"steps": [["13/2", 1], ["0", 12]]}));
        assert_eq!(t, "steps:\n  13/2   1\n     0  12");
    }
}
