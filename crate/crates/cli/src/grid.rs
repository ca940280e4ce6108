//! The fixed cross-check grid behind `check all`.

use rayon::prelude::*;

use qfsplit::elliptic::{legendre_hasse_poly, roots_in_field};
use qfsplit::field::is_prime;
use qfsplit::qfs::QfsLimits;
use qfsplit::{FqContext, QDivisor};

use crate::report::ReportRow;
use crate::{case_divisor, dieudonne_row, logcy_row, search_row, Case, CliError, GridSize, Route};

struct Shape {
    dieudonne_h: u32,
    dieudonne_e: u32,
    p_max_tables: u32,
    direct_p: &'static [u32],
    direct_e: &'static [u32],
}

fn shape(size: GridSize) -> Shape {
    match size {
        GridSize::Small => Shape { dieudonne_h: 3, dieudonne_e: 3, p_max_tables: 30, direct_p: &[2, 3, 5], direct_e: &[1] },
        GridSize::Full => Shape { dieudonne_h: 5, dieudonne_e: 6, p_max_tables: 100, direct_p: &[2, 3, 5, 7], direct_e: &[1, 2] },
    }
}

/// Case iv parameters: one supersingular and one ordinary λ in `F_{p²}` (only `z` at `p = 2`).
fn lambdas(p: u32) -> Result<Vec<String>, CliError> {
    let f = FqContext::new(p, 2)?;
    if p == 2 {
        return Ok(vec!["z".into()]);
    }
    let ss = roots_in_field(&legendre_hasse_poly(p), &f);
    let ord = f.elements().find(|&l| !l.is_zero() && l != f.one() && !ss.contains(&l));
    Ok(ss.first().into_iter().chain(ord.as_ref()).map(|&l| f.format(l)).collect())
}

fn direct_cells(s: &Shape) -> Result<Vec<(u32, Option<Case>, String, u32)>, CliError> {
    let mut cells = Vec::new();
    for &p in s.direct_p {
        for &e in s.direct_e {
            for case in [Case::I, Case::Ii, Case::Iii] {
                cells.push((p, Some(case), String::new(), e));
            }
            for l in lambdas(p)? {
                cells.push((p, Some(Case::Iv), l, e));
            }
            cells.push((p, None, String::new(), e));
        }
    }
    Ok(cells)
}

pub fn check_all(size: GridSize, lim: &QfsLimits) -> Result<Vec<ReportRow>, CliError> {
    let s = shape(size);
    let mut rows = Vec::new();
    for p in [2u32, 3, 5] {
        for h in 1..=s.dieudonne_h as usize {
            for e in 1..=s.dieudonne_e {
                rows.push(dieudonne_row(h, p, e, None)?);
            }
        }
    }
    for p in (2..=s.p_max_tables).filter(|&p| is_prime(p as u64)) {
        for case in [Case::I, Case::Ii, Case::Iii] {
            let (f, d) = case_divisor(case, p, "2")?;
            for e in 1..=3 {
                rows.push(logcy_row(&f, &d, e, Route::Both)?);
            }
        }
        for l in lambdas(p)? {
            let (f, d) = case_divisor(Case::Iv, p, &l)?;
            for e in 1..=3 {
                rows.push(logcy_row(&f, &d, e, Route::Both)?);
            }
        }
    }
    let cells = direct_cells(&s)?;
    let direct: Vec<Result<ReportRow, CliError>> = cells
        .par_iter()
        .map(|(p, case, l, e)| {
            let (f, d) = match case {
                Some(c) => case_divisor(*c, *p, l)?,
                None => (FqContext::new(*p, 2)?, QDivisor::zero()),
            };
            search_row(&f, &d, *e, e + 2, lim)
        })
        .collect();
    for r in direct {
        rows.push(r?);
    }
    Ok(rows)
}
