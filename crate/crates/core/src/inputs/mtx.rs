use std::path::Path;

use super::InputError;
use crate::kernels::CsrMatrix;

/// Parses a Matrix Market coordinate file with a `real` or `integer` field
/// and `general` or `symmetric` symmetry.
///
/// Indices are converted to 0-based, symmetric files are expanded to full
/// storage and duplicate entries are summed. Errors carry 1-based line
/// numbers.
pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix, InputError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hline, header) = lines.next().ok_or(InputError::Malformed {
        line: 1,
        message: "empty input".into(),
    })?;
    let symmetric = parse_header(hline, header)?;

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (sline, size) = body.next().ok_or(InputError::Malformed {
        line: hline,
        message: "missing size line".into(),
    })?;
    let dims = size
        .split_whitespace()
        .map(|t| parse_index(sline, t))
        .collect::<Result<Vec<_>, _>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(InputError::Malformed {
            line: sline,
            message: format!("size line needs 3 integers, found {}", dims.len()),
        });
    };

    let mut entries = Vec::with_capacity(if symmetric { 2 * nnz } else { nnz });
    let mut seen = 0;
    for (line, l) in body {
        let tok: Vec<&str> = l.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(InputError::Malformed {
                line,
                message: format!("expected 'row col value', found {} fields", tok.len()),
            });
        }
        let (i, j) = (parse_index(line, tok[0])?, parse_index(line, tok[1])?);
        let v: f64 = tok[2].parse().map_err(|_| InputError::NotNumeric {
            line,
            token: tok[2].into(),
        })?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(InputError::IndexOutOfBounds {
                line,
                row: i,
                col: j,
                rows,
                cols,
            });
        }
        entries.push((i - 1, j - 1, v));
        if symmetric && i != j {
            entries.push((j - 1, i - 1, v));
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(InputError::Malformed {
            line: sline,
            message: format!("declared {nnz} entries, found {seen}"),
        });
    }
    if symmetric && rows != cols {
        return Err(InputError::Malformed {
            line: sline,
            message: "symmetric matrix must be square".into(),
        });
    }
    CsrMatrix::from_triplets(rows, cols, entries).map_err(|e| InputError::Malformed {
        line: sline,
        message: e.to_string(),
    })
}

/// Returns whether the matrix is symmetric.
fn parse_header(line: usize, header: &str) -> Result<bool, InputError> {
    let tok: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    let malformed = |message: &str| InputError::Malformed {
        line,
        message: message.into(),
    };
    if tok.len() != 5 || tok[0] != "%%matrixmarket" || tok[1] != "matrix" {
        return Err(malformed(
            "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if tok[2] != "coordinate" {
        return Err(InputError::Unsupported {
            line,
            field: tok[2].clone(),
        });
    }
    match tok[3].as_str() {
        "real" | "integer" => {}
        "pattern" | "complex" => {
            return Err(InputError::Unsupported {
                line,
                field: tok[3].clone(),
            })
        }
        _ => return Err(malformed("unknown field type")),
    }
    match tok[4].as_str() {
        "general" => Ok(false),
        "symmetric" => Ok(true),
        "skew-symmetric" | "hermitian" => Err(InputError::Unsupported {
            line,
            field: tok[4].clone(),
        }),
        _ => Err(malformed("unknown symmetry")),
    }
}

fn parse_index(line: usize, token: &str) -> Result<usize, InputError> {
    token.parse().map_err(|_| InputError::NotNumeric {
        line,
        token: token.into(),
    })
}

pub fn load_matrix_market(path: &Path) -> Result<CsrMatrix, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix_market(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GENERAL: &str = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 3.0\n2 2 4.0\n";

    #[test]
    fn diagonal() {
        let m = parse_matrix_market(GENERAL).unwrap();
        assert_eq!(m.row_ptr(), &[0, 1, 2]);
        assert_eq!(m.col_idx(), &[0, 1]);
        assert_eq!(m.values(), &[3.0, 4.0]);
    }

    #[test]
    fn symmetric_expands() {
        let m = parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 1\n2 1 5.0\n").unwrap();
        assert_eq!(m.row(0).collect::<Vec<_>>(), vec![(1, 5.0)]);
        assert_eq!(m.row(1).collect::<Vec<_>>(), vec![(0, 5.0)]);
    }

    #[test]
    fn duplicates_sum_and_rows_sort() {
        let m =
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 3 3\n1 3 1.0\n1 1 2.0\n1 3 0.5\n")
                .unwrap();
        assert_eq!(m.col_idx(), &[0, 2]);
        assert_eq!(m.values(), &[2.0, 1.5]);
    }

    #[test]
    fn unsupported_fields_are_distinct() {
        for field in ["pattern", "complex"] {
            let text = format!("%%MatrixMarket matrix coordinate {field} general\n1 1 0\n");
            assert!(matches!(
                parse_matrix_market(&text),
                Err(InputError::Unsupported { line: 1, .. })
            ));
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket vector\n"),
            Err(InputError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"),
            Err(InputError::IndexOutOfBounds { line: 3, .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n%\n1 1 abc\n"),
            Err(InputError::NotNumeric { line: 4, .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"),
            Err(InputError::Malformed { line: 2, .. })
        ));
    }
}
