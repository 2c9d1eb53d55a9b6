use super::{MeshError, StructuredQuadMesh};
use crate::geom::Point2;
use std::io::{BufRead, Write};

/// Write `M N` followed by one `x y` line per vertex, `i` fastest, with 17
/// significant digits so the text round-trips exactly.
pub fn write_mesh<W: Write>(mesh: &StructuredQuadMesh, mut w: W) -> Result<(), MeshError> {
    writeln!(w, "{} {}", mesh.m(), mesh.n())?;
    for p in mesh.vertices() {
        writeln!(w, "{:.16e} {:.16e}", p.x, p.y)?;
    }
    Ok(())
}

pub fn read_mesh<R: BufRead>(r: R) -> Result<StructuredQuadMesh, MeshError> {
    let mut lines = r
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let parse_err = |line: usize, msg: &str| MeshError::Parse {
        line,
        msg: msg.to_string(),
    };

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty mesh file"))?;
    let header = header?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| parse_err(line_no, &e.to_string())))
        .collect::<Result<_, _>>()?;
    let [m, n] = dims[..] else {
        return Err(parse_err(line_no, "expected `M N`"));
    };

    let mut points = Vec::with_capacity(m.saturating_mul(n));
    for (line_no, line) in lines {
        let line = line?;
        let xy: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| parse_err(line_no, &e.to_string())))
            .collect::<Result<_, _>>()?;
        let [x, y] = xy[..] else {
            return Err(parse_err(line_no, "expected `x y`"));
        };
        points.push(Point2::new(x, y));
    }
    StructuredQuadMesh::new(m, n, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_exact() {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0 / 3.0, 0.0),
            Point2::new(0.1, 0.7),
            Point2::new(0.3 + 1e-17, 0.9),
        ];
        let mesh = StructuredQuadMesh::new(2, 2, pts).unwrap();
        let mut buf = Vec::new();
        write_mesh(&mesh, &mut buf).unwrap();
        let back = read_mesh(buf.as_slice()).unwrap();
        assert_eq!(back, mesh);
    }

    #[test]
    fn bad_header() {
        let r = read_mesh("2\n0 0\n".as_bytes());
        assert!(matches!(r, Err(MeshError::Parse { line: 1, .. })));
    }

    #[test]
    fn short_file() {
        let r = read_mesh("2 2\n0 0\n1 0\n0 1\n".as_bytes());
        assert!(matches!(r, Err(MeshError::DimensionMismatch { .. })));
    }
}
