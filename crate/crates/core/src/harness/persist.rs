//! RunRecord on disk: a directory with `meta.txt`, `diagnostics.csv`,
//! `final_state.txt` and `snapshots/snap_NNNNN.txt`.
//!
//! Floats are written with `Display`, which prints the shortest string
//! that parses back to the same value, so a load reproduces the record
//! exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::record::{Abort, DiagRow, EnergyColumns, RunRecord, Snapshot};
use crate::thermo::State;

pub const DIAG_HEADER: &str = "t,theta_sq_min,vel_sup_ratio,baryon_residual,E_total,E_u,E_v,E_w,dt";
const SNAP_COLUMNS: &str = "x r u v w rho n";
const STATE_COLUMNS: &str = "r u v w";

fn parse_f(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Io(format!("cannot parse {what} from `{s}`")))
}

fn columns_text(t: f64, header: &str, cols: &[&Vec<f64>]) -> String {
    let mut out = format!("# t={t}\n# {header}\n");
    let rows = cols.first().map_or(0, |c| c.len());
    for i in 0..rows {
        let line: Vec<String> = cols.iter().map(|c| c[i].to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_columns(text: &str, ncols: usize) -> Result<(f64, Vec<Vec<f64>>)> {
    let mut t = None;
    let mut cols = vec![Vec::new(); ncols];
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# t=") {
            t = Some(parse_f(rest, "time")?);
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let vals: Vec<&str> = line.split_whitespace().collect();
        if vals.len() != ncols {
            return Err(Error::Io(format!("expected {ncols} columns, got {}", vals.len())));
        }
        for (c, v) in cols.iter_mut().zip(vals) {
            c.push(parse_f(v, "field value")?);
        }
    }
    Ok((t.ok_or_else(|| Error::Io("missing `# t=` line".into()))?, cols))
}

pub fn diagnostics_csv(rows: &[DiagRow]) -> String {
    let mut out = String::from(DIAG_HEADER);
    out.push('\n');
    for r in rows {
        let e = |f: fn(&EnergyColumns) -> f64| r.energy.as_ref().map(f).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.t,
            r.theta_sq_min,
            r.vel_sup_ratio,
            r.baryon_residual,
            e(|c| c.total),
            e(|c| c.e_u),
            e(|c| c.e_v),
            e(|c| c.e_w),
            r.dt
        );
    }
    out
}

fn parse_diagnostics(text: &str) -> Result<Vec<DiagRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(DIAG_HEADER) {
        return Err(Error::Io("diagnostics.csv has an unexpected header".into()));
    }
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Io(format!("diagnostics row has {} fields", f.len())));
        }
        let energy = if f[4].is_empty() {
            None
        } else {
            Some(EnergyColumns {
                total: parse_f(f[4], "E_total")?,
                e_u: parse_f(f[5], "E_u")?,
                e_v: parse_f(f[6], "E_v")?,
                e_w: parse_f(f[7], "E_w")?,
            })
        };
        rows.push(DiagRow {
            t: parse_f(f[0], "t")?,
            theta_sq_min: parse_f(f[1], "theta_sq_min")?,
            vel_sup_ratio: parse_f(f[2], "vel_sup_ratio")?,
            baryon_residual: parse_f(f[3], "baryon_residual")?,
            energy,
            dt: parse_f(f[8], "dt")?,
        });
    }
    Ok(rows)
}

/// Write a record into `dir` (created if missing; existing files with the
/// same names are replaced).
pub fn save(record: &RunRecord, dir: &Path) -> Result<()> {
    let snap_dir = dir.join("snapshots");
    if snap_dir.exists() {
        fs::remove_dir_all(&snap_dir)?;
    }
    fs::create_dir_all(&snap_dir)?;

    let mut meta = String::new();
    for (k, v) in &record.meta {
        let _ = writeln!(meta, "{k}={v}");
    }
    let _ = writeln!(meta, "steps={}", record.steps);
    if let Some(a) = &record.abort {
        let _ = writeln!(meta, "abort.t={}", a.t);
        if let Some(n) = a.node {
            let _ = writeln!(meta, "abort.node={n}");
        }
        let _ = writeln!(meta, "abort.message={}", a.message.replace('\n', " "));
    }
    fs::write(dir.join("meta.txt"), meta)?;
    fs::write(dir.join("diagnostics.csv"), diagnostics_csv(&record.rows))?;
    let s = &record.final_state;
    fs::write(
        dir.join("final_state.txt"),
        columns_text(s.t, STATE_COLUMNS, &[&s.r, &s.u, &s.v, &s.w]),
    )?;
    for (i, snap) in record.snapshots.iter().enumerate() {
        let text = columns_text(
            snap.t,
            SNAP_COLUMNS,
            &[&snap.x, &snap.r, &snap.u, &snap.v, &snap.w, &snap.rho, &snap.n],
        );
        fs::write(snap_dir.join(format!("snap_{i:05}.txt")), text)?;
    }
    Ok(())
}

pub fn load(dir: &Path) -> Result<RunRecord> {
    let mut meta = BTreeMap::new();
    let mut steps = 0;
    let (mut abort_t, mut abort_node, mut abort_msg) = (None, None, None);
    for line in fs::read_to_string(dir.join("meta.txt"))?.lines() {
        let Some((k, v)) = line.split_once('=') else {
            continue;
        };
        match k {
            "steps" => steps = v.parse().map_err(|_| Error::Io(format!("bad steps `{v}`")))?,
            "abort.t" => abort_t = Some(parse_f(v, "abort time")?),
            "abort.node" => abort_node = Some(v.parse().map_err(|_| Error::Io(format!("bad node `{v}`")))?),
            "abort.message" => abort_msg = Some(v.to_string()),
            _ => {
                meta.insert(k.to_string(), v.to_string());
            }
        }
    }
    let abort = abort_msg.map(|message| Abort {
        message,
        node: abort_node,
        t: abort_t.unwrap_or(f64::NAN),
    });
    let rows = parse_diagnostics(&fs::read_to_string(dir.join("diagnostics.csv"))?)?;
    let (t, cols) = parse_columns(&fs::read_to_string(dir.join("final_state.txt"))?, 4)?;
    let [r, u, v, w]: [Vec<f64>; 4] = cols.try_into().expect("four columns");
    let final_state = State { t, r, u, v, w };

    let mut names: Vec<_> = fs::read_dir(dir.join("snapshots"))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    names.sort();
    let mut snapshots = Vec::with_capacity(names.len());
    for p in names {
        let (t, cols) = parse_columns(&fs::read_to_string(&p)?, 7)?;
        let [x, r, u, v, w, rho, n]: [Vec<f64>; 7] = cols.try_into().expect("seven columns");
        snapshots.push(Snapshot { t, x, r, u, v, w, rho, n });
    }
    Ok(RunRecord {
        meta,
        rows,
        snapshots,
        final_state,
        abort,
        steps,
    })
}
