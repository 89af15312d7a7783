//! Regeneration of the published example tables from their `d` values.
//!
//! Rows keep the printed order of the two primes. Class-group coordinate
//! columns are not computable here and are rendered as `external`.

use std::io::Write;

use capitula_core::ambiguous::{ams_presentation, pair_product_principal};
use capitula_core::capitulation::{kernel_k1, kernel_k3, KernelReport};
use capitula_core::fsu::{classify_k3, pm_square_signs, q_k_index, FieldData};
use capitula_core::numtheory::{validate_pair_u64, Integer, Slot};
use clap::ValueEnum;

use crate::error::CliResult;
use crate::report::words;
use crate::{Format, Settings};

pub const EXTERNAL: &str = "external";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableSet {
    Ex48,
    Ex49,
    #[value(name = "k3-q")]
    K3Q,
    K3Sq,
    Genus,
}

impl TableSet {
    pub fn all() -> [TableSet; 5] {
        [
            TableSet::Ex48,
            TableSet::Ex49,
            TableSet::K3Q,
            TableSet::K3Sq,
            TableSet::Genus,
        ]
    }

    pub fn id(self) -> &'static str {
        match self {
            TableSet::Ex48 => "ex48",
            TableSet::Ex49 => "ex49",
            TableSet::K3Q => "k3-q",
            TableSet::K3Sq => "k3-sq",
            TableSet::Genus => "genus",
        }
    }

    /// `(section, p1, p2)` in printed order.
    pub fn rows(self) -> &'static [(&'static str, u64, u64)] {
        match self {
            TableSet::Ex48 => &[
                ("square", 41, 17),
                ("square", 97, 17),
                ("square", 449, 17),
                ("non-square", 5, 89),
                ("non-square", 53, 17),
                ("non-square", 37, 73),
            ],
            TableSet::Ex49 => &[
                ("norms", 5, 29),
                ("norms", 13, 17),
                ("norms", 29, 13),
                ("norms", 41, 13),
                ("square", 17, 41),
                ("square", 89, 41),
                ("square", 73, 113),
                ("non-square", 5, 41),
                ("non-square", 13, 113),
                ("non-square", 37, 41),
                ("non-square", 5, 809),
            ],
            TableSet::K3Q => &[
                ("q=2", 5, 13),
                ("q=2", 13, 41),
                ("q=2", 29, 37),
                ("q=1", 5, 29),
                ("q=1", 13, 29),
                ("q=1", 37, 13),
                ("q=1", 53, 13),
            ],
            TableSet::K3Sq => &[
                ("mixed", 5, 89),
                ("mixed", 53, 17),
                ("mixed", 61, 41),
                ("square", 73, 89),
                ("square", 17, 433),
                ("square", 41, 401),
                ("square", 41, 569),
                ("non-square", 5, 41),
                ("non-square", 13, 113),
                ("non-square", 401, 5),
                ("non-square", 37, 73),
            ],
            TableSet::Genus => &[
                ("N=-1", 13, 17),
                ("N=-1", 41, 13),
                ("N=-1", 17, 37),
                ("Q=2", 17, 41),
                ("Q=2", 97, 17),
                ("Q=2", 17, 113),
                ("Q=1", 5, 89),
                ("Q=1", 53, 17),
                ("Q=1", 13, 113),
            ],
        }
    }

    pub fn header(self) -> Vec<&'static str> {
        let mut h = vec!["section", "d", "p1", "p2"];
        h.extend_from_slice(match self {
            TableSet::Ex48 => &[
                "eps_d", "x+1", "x-1", "x+-1_square", "H1H2_in_k", "K1_size", "K1_kernel",
                "classes",
            ][..],
            TableSet::Ex49 => &[
                "N(eps2)", "N(eps3)", "eps_d", "x+1", "x-1", "x+-1_square", "H1H2_in_k",
                "K1_size", "K1_kernel", "classes",
            ][..],
            TableSet::K3Q => &[
                "q", "N(eps2)", "N(eps3)", "H1H2_in_k", "K3_size", "K3_kernel", "classes",
            ][..],
            TableSet::K3Sq => &[
                "N(eps2)", "N(eps3)", "eps_d", "x+1", "x-1", "x+-1_square", "H1H2_in_k",
                "K3_size", "K3_kernel", "classes",
            ][..],
            TableSet::Genus => &[
                "N(eps_d)", "Q", "H1H2_in_k", "H3H4_in_k", "Am_s", "Am_s_size", "classes",
            ][..],
        });
        h
    }
}

fn principal(b: bool) -> String {
    if b { "principal" } else { "not principal" }.to_string()
}

fn kernel_cell(k: &KernelReport) -> String {
    format!("<{}>", words(&k.generators).join(", "))
}

fn square_cell(x: &Integer) -> String {
    match pm_square_signs(x, &Integer::from(1)) {
        (true, _) => "x+1",
        (_, true) => "x-1",
        _ => "no",
    }
    .to_string()
}

/// One computed row (without the optional order column).
pub fn compute_row(
    set: TableSet,
    section: &str,
    p1: u64,
    p2: u64,
    settings: &Settings,
) -> CliResult<Vec<String>> {
    let pair = validate_pair_u64(p1, p2).map_err(capitula_core::Error::from)?;
    let data = FieldData::with_period_cap(&pair, settings.period_cap)?;
    let eps = data.eps_d();
    let x = eps.x();
    let h12 = principal(pair_product_principal(Slot::P1, &data)?);
    let mut row = vec![
        section.to_string(),
        data.d().to_string(),
        p1.to_string(),
        p2.to_string(),
    ];
    let eps_cells = || {
        vec![
            eps.to_string(),
            (x + 1u32).to_string(),
            (x - 1u32).to_string(),
            square_cell(x),
        ]
    };
    match set {
        TableSet::Ex48 | TableSet::Ex49 => {
            let k = kernel_k1(&data)?;
            if set == TableSet::Ex49 {
                let (n2, n3) = k.case.as_ref().expect("tower case").branch.norms();
                row.extend([n2.to_string(), n3.to_string()]);
            }
            row.extend(eps_cells());
            row.extend([h12, k.size.to_string(), kernel_cell(&k)]);
        }
        TableSet::K3Q | TableSet::K3Sq => {
            let case = classify_k3(&data)?;
            let k = kernel_k3(&data)?;
            let (n2, n3) = case.branch.norms();
            if set == TableSet::K3Q {
                row.push(case.unit_index.expect("K3 unit index").to_string());
                row.extend([n2.to_string(), n3.to_string()]);
            } else {
                row.extend([n2.to_string(), n3.to_string()]);
                row.extend(eps_cells());
            }
            row.extend([h12, k.size.to_string(), kernel_cell(&k)]);
        }
        TableSet::Genus => {
            let ams = ams_presentation(&data)?;
            row.extend([
                eps.norm_sign().to_string(),
                q_k_index(&data)?.to_string(),
                h12,
                principal(pair_product_principal(Slot::P2, &data)?),
                format!("<{}>", words(&ams.group.generators).join(", ")),
                ams.group.size().to_string(),
            ]);
        }
    }
    row.push(EXTERNAL.to_string());
    Ok(row)
}

/// The full table; with `both_orders` every row is followed by its swap.
pub fn compute_table(
    set: TableSet,
    both_orders: bool,
    settings: &Settings,
) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut header: Vec<String> = set.header().iter().map(|s| s.to_string()).collect();
    if both_orders {
        header.insert(1, "order".into());
    }
    let mut rows = Vec::new();
    for &(section, p1, p2) in set.rows() {
        let orders: &[(u64, u64, &str)] = if both_orders {
            &[(p1, p2, "printed"), (p2, p1, "swapped")]
        } else {
            &[(p1, p2, "printed")]
        };
        for &(a, b, order) in orders {
            let mut row = compute_row(set, section, a, b, settings)?;
            if both_orders {
                row.insert(1, order.to_string());
            }
            rows.push(row);
        }
    }
    Ok((header, rows))
}

pub fn render_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(&rule));
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

pub fn write_table(
    out: &mut dyn Write,
    set: TableSet,
    both_orders: bool,
    format: Format,
    settings: &Settings,
) -> CliResult<()> {
    let (header, rows) = compute_table(set, both_orders, settings)?;
    match format {
        Format::Text => out.write_all(render_text(&header, &rows).as_bytes())?,
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .quote_style(csv::QuoteStyle::Necessary)
                .from_writer(out);
            w.write_record(&header)?;
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                        .collect()
                })
                .collect();
            let body = serde_json::json!({ "set": set.id(), "rows": records });
            writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("table serializes"))?;
        }
    }
    Ok(())
}
