//! Sparse SDPA (`.dat-s`) import and export.
//!
//! The file format carries the pair
//!
//! ```text
//!   min Σ c_i x_i   s.t.  Σ x_i F_i − F_0 ⪰ 0
//!   max Tr(F_0 Y)   s.t.  Tr(F_i Y) = c_i,  Y ⪰ 0
//! ```
//!
//! Our standard form (minimize ⟨C,X⟩ over ⟨A_i,X⟩ = b_i, X ⪰ 0) is the
//! second line with F_0 = −C, F_i = A_i, c = b, so a value reported by an
//! external SDPA-family solver equals the *negative* of our optimum.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::problem::{Constraint, Functional, SdpProblem};
use crate::SdpError;

pub fn write_dats<W: Write>(problem: &SdpProblem, mut out: W) -> io::Result<()> {
    let m = problem.constraints().len();
    let dims = problem.block_dims();
    writeln!(out, "{}", m)?;
    writeln!(out, "{}", dims.len())?;
    let dim_line: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    writeln!(out, "{}", dim_line.join(" "))?;
    let rhs_line: Vec<String> = problem
        .constraints()
        .iter()
        .map(|c| format!("{:.17e}", c.rhs))
        .collect();
    writeln!(out, "{}", rhs_line.join(" "))?;

    let mut emit = |matno: usize, block: usize, mat: &DMatrix<f64>, negate: bool| -> io::Result<()> {
        for i in 0..mat.nrows() {
            for j in i..mat.ncols() {
                let v = if negate { -mat[(i, j)] } else { mat[(i, j)] };
                if v != 0.0 {
                    writeln!(out, "{} {} {} {} {:.17e}", matno, block + 1, i + 1, j + 1, v)?;
                }
            }
        }
        Ok(())
    };

    for (block, mat) in problem.objective().terms() {
        emit(0, *block, mat, true)?;
    }
    for (idx, cons) in problem.constraints().iter().enumerate() {
        for (block, mat) in cons.functional.terms() {
            emit(idx + 1, *block, mat, false)?;
        }
    }
    Ok(())
}

pub fn write_dats_file(problem: &SdpProblem, path: &Path) -> io::Result<()> {
    write_dats(problem, BufWriter::new(File::create(path)?))
}

pub fn read_dats<R: BufRead>(input: R) -> Result<SdpProblem, SdpError> {
    let mut tokens: Vec<String> = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| SdpError::SdpaParse(format!("read error: {e}")))?;
        let trimmed = line.trim_start();
        if trimmed.starts_with('"') || trimmed.starts_with('*') {
            continue;
        }
        let cleaned: String = line
            .chars()
            .map(|c| if matches!(c, ',' | '{' | '}' | '(' | ')') { ' ' } else { c })
            .collect();
        tokens.extend(cleaned.split_whitespace().map(str::to_owned));
    }
    let mut cur = Cursor { tokens: &tokens, pos: 0 };

    let m = cur.next_usize("constraint count")?;
    let nblocks = cur.next_usize("block count")?;
    if nblocks == 0 {
        return Err(SdpError::SdpaParse("zero blocks".into()));
    }
    let mut dims = Vec::with_capacity(nblocks);
    for _ in 0..nblocks {
        let raw: i64 = cur.next_parsed("block size")?;
        // negative sizes mark diagonal blocks; we keep them as dense
        let d = raw.unsigned_abs() as usize;
        if d == 0 {
            return Err(SdpError::SdpaParse("zero-dimensional block".into()));
        }
        dims.push(d);
    }
    let mut rhs = Vec::with_capacity(m);
    for _ in 0..m {
        rhs.push(cur.next_parsed::<f64>("rhs value")?);
    }

    // accumulate matno → per-block dense matrices
    let mut mats: Vec<Vec<Option<DMatrix<f64>>>> = (0..=m).map(|_| vec![None; nblocks]).collect();
    while !cur.done() {
        let matno = cur.next_usize("matrix index")?;
        let blkno = cur.next_usize("block index")?;
        let i = cur.next_usize("row index")?;
        let j = cur.next_usize("column index")?;
        let v: f64 = cur.next_parsed("entry value")?;
        if matno > m {
            return Err(SdpError::SdpaParse(format!("matrix index {matno} > {m}")));
        }
        if blkno == 0 || blkno > nblocks {
            return Err(SdpError::SdpaParse(format!("block index {blkno} out of range")));
        }
        let d = dims[blkno - 1];
        if i == 0 || j == 0 || i > d || j > d {
            return Err(SdpError::SdpaParse(format!(
                "entry ({i},{j}) outside {d}x{d} block {blkno}"
            )));
        }
        let slot = &mut mats[matno][blkno - 1];
        let mat = slot.get_or_insert_with(|| DMatrix::zeros(d, d));
        mat[(i - 1, j - 1)] = v;
        mat[(j - 1, i - 1)] = v;
    }

    let collect = |per_block: &[Option<DMatrix<f64>>], negate: bool| -> Result<Functional, SdpError> {
        let terms: Vec<(usize, DMatrix<f64>)> = per_block
            .iter()
            .enumerate()
            .filter_map(|(blk, m)| {
                m.as_ref()
                    .map(|m| (blk, if negate { -m.clone() } else { m.clone() }))
            })
            .collect();
        Functional::new(terms)
    };

    let objective = collect(&mats[0], true)?;
    let mut constraints = Vec::with_capacity(m);
    for (idx, value) in rhs.into_iter().enumerate() {
        constraints.push(Constraint {
            functional: collect(&mats[idx + 1], false)?,
            rhs: value,
        });
    }
    SdpProblem::new(dims, objective, constraints)
}

pub fn read_dats_file(path: &Path) -> Result<SdpProblem, SdpError> {
    let file = File::open(path).map_err(|e| SdpError::SdpaParse(format!("open failed: {e}")))?;
    read_dats(BufReader::new(file))
}

struct Cursor<'a> {
    tokens: &'a [String],
    pos: usize,
}

impl Cursor<'_> {
    fn next(&mut self, what: &str) -> Result<&str, SdpError> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| SdpError::SdpaParse(format!("unexpected end of file, wanted {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn next_parsed<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, SdpError> {
        let t = self.next(what)?;
        t.parse()
            .map_err(|_| SdpError::SdpaParse(format!("bad {what}: {t:?}")))
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, SdpError> {
        self.next_parsed(what)
    }

    fn done(&self) -> bool {
        self.pos >= self.tokens.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SdpProblem {
        let dims = vec![2, 3];
        let c = Functional::new(vec![
            (0, DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -2.0])),
            (1, DMatrix::identity(3, 3)),
        ])
        .unwrap();
        let a0 = Functional::new(vec![(0, DMatrix::identity(2, 2))]).unwrap();
        let a1 = Functional::new(vec![(
            1,
            DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.25, 0.0, 0.25, 3.0]),
        )])
        .unwrap();
        SdpProblem::new(
            dims,
            c,
            vec![
                Constraint { functional: a0, rhs: 1.0 },
                Constraint { functional: a1, rhs: -0.125 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let problem = sample();
        let mut buf = Vec::new();
        write_dats(&problem, &mut buf).unwrap();
        let back = read_dats(buf.as_slice()).unwrap();
        assert_eq!(back.block_dims(), problem.block_dims());
        assert_eq!(back.constraints().len(), problem.constraints().len());
        for (orig, parsed) in problem.constraints().iter().zip(back.constraints()) {
            assert_eq!(orig.rhs, parsed.rhs);
            assert_eq!(orig.functional.terms(), parsed.functional.terms());
        }
        assert_eq!(problem.objective().terms(), back.objective().terms());
    }

    #[test]
    fn parses_comments_braces_and_diagonal_blocks() {
        let text = r#""hand-written example
* another comment
2
2
{2, -3}
1.0, 2.0
0 1 1 1 -1.0
1 1 1 2 0.5
2 2 1 1 4.0
2 2 3 3 -4.0
"#;
        let problem = read_dats(text.as_bytes()).unwrap();
        assert_eq!(problem.block_dims(), &[2, 3]);
        assert_eq!(problem.constraints().len(), 2);
        // objective flips sign relative to F_0
        let (blk, mat) = &problem.objective().terms()[0];
        assert_eq!(*blk, 0);
        assert_eq!(mat[(0, 0)], 1.0);
        let (blk, mat) = &problem.constraints()[1].functional.terms()[0];
        assert_eq!(*blk, 1);
        assert_eq!(mat[(0, 0)], 4.0);
        assert_eq!(mat[(2, 2)], -4.0);
    }

    #[test]
    fn truncated_entry_is_an_error() {
        let text = "1\n1\n2\n1.0\n1 1 1\n";
        assert!(read_dats(text.as_bytes()).is_err());
    }

    #[test]
    fn out_of_range_block_is_an_error() {
        let text = "1\n1\n2\n1.0\n1 2 1 1 1.0\n";
        assert!(read_dats(text.as_bytes()).is_err());
    }
}
