//! FCIDUMP reader and writer.
//!
//! Records are `value i j k l` with 1-based spatial indices in chemist
//! notation: `(ij|kl)` when all four are nonzero, `h_ij` when `k = l = 0`,
//! and the core energy when all indices are zero. Records `value i 0 0 0`
//! (orbital energies) are accepted and ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::{IntegralTensors, IntegralsError, SYMMETRY_TOL};

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
}

fn parse_header(lines: &mut std::iter::Enumerate<std::str::Lines<'_>>) -> Result<(Header, usize), IntegralsError> {
    let bad = |m: &str| IntegralsError::MalformedHeader(m.to_string());
    let mut text = String::new();
    let mut started = false;
    for (no, line) in lines.by_ref() {
        let last_line = no + 1;
        let trimmed = line.trim();
        if !started {
            if trimmed.is_empty() {
                continue;
            }
            let upper = trimmed.to_ascii_uppercase();
            let Some(rest) = upper.strip_prefix("&FCI") else {
                return Err(bad("file must begin with an &FCI namelist"));
            };
            started = true;
            if let Some(body) = strip_terminator(rest) {
                text.push_str(body);
                text.push(',');
                return Ok((header_fields(&text)?, last_line));
            }
            text.push_str(rest);
            text.push(',');
            continue;
        }
        let upper = trimmed.to_ascii_uppercase();
        if let Some(body) = strip_terminator(&upper) {
            text.push_str(body);
            return Ok((header_fields(&text)?, last_line));
        }
        text.push_str(&upper);
        text.push(',');
    }
    Err(if started { bad("namelist is not terminated by &END or /") } else { bad("empty input") })
}

fn strip_terminator(s: &str) -> Option<&str> {
    let s = s.trim_end();
    s.strip_suffix("&END").or_else(|| s.strip_suffix('/')).or_else(|| {
        // `&END` may be followed by stray whitespace only; anything else is body text.
        s.find("&END").map(|i| &s[..i])
    })
}

fn header_fields(text: &str) -> Result<Header, IntegralsError> {
    let mut fields: HashMap<String, String> = HashMap::new();
    let mut current: Option<String> = None;
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((k, v)) = tok.split_once('=') {
            let k = k.trim().to_string();
            fields.insert(k.clone(), v.trim().to_string());
            current = Some(k);
        } else if current.is_none() {
            return Err(IntegralsError::MalformedHeader(format!("unexpected token {tok:?}")));
        }
        // Bare tokens continue a list value such as ORBSYM=1,1,1.
    }
    let int = |key: &str| -> Result<Option<i64>, IntegralsError> {
        fields
            .get(key)
            .map(|v| {
                v.parse::<i64>().map_err(|_| IntegralsError::MalformedHeader(format!("{key}={v} is not an integer")))
            })
            .transpose()
    };
    let norb = int("NORB")?.ok_or_else(|| IntegralsError::MalformedHeader("missing NORB".into()))?;
    let nelec = int("NELEC")?.ok_or_else(|| IntegralsError::MalformedHeader("missing NELEC".into()))?;
    let ms2 = int("MS2")?.unwrap_or(0);
    if norb <= 0 {
        return Err(IntegralsError::MalformedHeader(format!("NORB={norb} must be positive")));
    }
    if nelec < 0 || ms2.abs() > nelec || (nelec + ms2) % 2 != 0 {
        return Err(IntegralsError::MalformedHeader(format!("inconsistent NELEC={nelec}, MS2={ms2}")));
    }
    Ok(Header { norb: norb as usize, nelec: nelec as usize, ms2 })
}

fn parse_value(field: &str, line: usize) -> Result<f64, IntegralsError> {
    let normalized = field.replace(['D', 'd'], "E");
    normalized
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| IntegralsError::NonNumeric { line, field: field.to_string() })
}

/// Stores `value` at every symmetry image, rejecting disagreement with an
/// earlier record.
fn store(slot: &mut [Option<f64>], images: &[usize], value: f64, line: usize) -> Result<(), IntegralsError> {
    for &k in images {
        if let Some(prev) = slot[k] {
            if (prev - value).abs() > SYMMETRY_TOL {
                return Err(IntegralsError::ConflictingEntry { line, previous: prev, value });
            }
        }
    }
    for &k in images {
        slot[k].get_or_insert(value);
    }
    Ok(())
}

/// Parses FCIDUMP text into spin-orbital tensors.
pub fn parse_fcidump(text: &str) -> Result<IntegralTensors, IntegralsError> {
    let mut lines = text.lines().enumerate();
    let (header, _) = parse_header(&mut lines)?;
    let n = header.norb;
    let mut one: Vec<Option<f64>> = vec![None; n * n];
    let mut two: Vec<Option<f64>> = vec![None; n.pow(4)];
    let mut core: Option<f64> = None;
    let idx4 = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;

    for (no, raw) in lines {
        let line = no + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(IntegralsError::MalformedRecord { line, text: raw.to_string() });
        }
        let value = parse_value(fields[0], line)?;
        let mut ix = [0usize; 4];
        for (slot, f) in ix.iter_mut().zip(&fields[1..]) {
            let v: i64 = f.parse().map_err(|_| IntegralsError::NonNumeric { line, field: f.to_string() })?;
            if v < 0 || v as usize > n {
                return Err(IntegralsError::IndexOutOfRange { line, index: v, norb: n });
            }
            *slot = v as usize;
        }
        match ix {
            [0, 0, 0, 0] => {
                if let Some(prev) = core {
                    if (prev - value).abs() > SYMMETRY_TOL {
                        return Err(IntegralsError::ConflictingEntry { line, previous: prev, value });
                    }
                }
                core.get_or_insert(value);
            }
            [_, 0, 0, 0] => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let (i, j) = (i - 1, j - 1);
                store(&mut one, &[i * n + j, j * n + i], value, line)?;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
                let images = [
                    idx4(i, j, k, l),
                    idx4(j, i, k, l),
                    idx4(i, j, l, k),
                    idx4(j, i, l, k),
                    idx4(k, l, i, j),
                    idx4(l, k, i, j),
                    idx4(k, l, j, i),
                    idx4(l, k, j, i),
                ];
                store(&mut two, &images, value, line)?;
            }
            _ => return Err(IntegralsError::MalformedRecord { line, text: raw.to_string() }),
        }
    }

    let h = DMatrix::from_row_iterator(n, n, one.iter().map(|v| v.unwrap_or(0.0)));
    let eri: Vec<f64> = two.iter().map(|v| v.unwrap_or(0.0)).collect();
    let n_alpha = (header.nelec as i64 + header.ms2) as usize / 2;
    let n_beta = header.nelec - n_alpha;
    if n_alpha > n || n_beta > n {
        return Err(IntegralsError::MalformedHeader(format!("NELEC={} does not fit NORB={n}", header.nelec)));
    }
    IntegralTensors::from_spatial(core.unwrap_or(0.0), &h, &eri, n_alpha, n_beta)
}

/// Serializes spin-restricted tensors. Every symmetry-unique nonzero integral
/// is written once; values use the shortest round-tripping decimal form.
pub fn write_fcidump(tensors: &IntegralTensors) -> Result<String, IntegralsError> {
    if !tensors.is_spin_restricted() {
        return Err(IntegralsError::InvalidTensors("FCIDUMP needs identical α and β integrals".into()));
    }
    let n = tensors.n_spatial_orbitals();
    let ms2 = tensors.n_alpha() as i64 - tensors.n_beta() as i64;
    let mut out = String::new();
    writeln!(out, "&FCI NORB={n},NELEC={},MS2={ms2},", tensors.n_electrons()).unwrap();
    writeln!(out, "&END").unwrap();
    let pair = |i: usize, j: usize| i * (i + 1) / 2 + j;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair(i, j) < pair(k, l) {
                        continue;
                    }
                    let v = tensors.chemist(i, j, k, l);
                    if v != 0.0 {
                        writeln!(out, "{v:?} {} {} {} {}", i + 1, j + 1, k + 1, l + 1).unwrap();
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = tensors.one_body(i, j);
            if v != 0.0 {
                writeln!(out, "{v:?} {} {} 0 0", i + 1, j + 1).unwrap();
            }
        }
    }
    writeln!(out, "{:?} 0 0 0 0", tensors.core_energy()).unwrap();
    Ok(out)
}
