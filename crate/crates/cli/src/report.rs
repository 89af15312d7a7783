//! Per-pair report: everything the library computes for one ordered pair.

use std::fmt::Write as _;

use capitula_core::ambiguous::{
    ambiguous_counts, is_type_222, pair_product_principal, AmsCase, ClassWord,
};
use capitula_core::capitulation::{kernels, verify_kernels, KernelReport, Kernels};
use capitula_core::fsu::{classify_k1, classify_k2, classify_k3, k3_unit_index_numeric, FieldData};
use capitula_core::numtheory::{Primality, PrimePair, Slot};
use capitula_core::pell::QuadUnit;
use capitula_core::Error;
use serde::Serialize;

use crate::Settings;

#[derive(Debug, Clone, Serialize)]
pub struct UnitJson {
    pub x: String,
    pub y: String,
    pub den: u8,
    pub norm: i8,
}

impl From<&QuadUnit> for UnitJson {
    fn from(u: &QuadUnit) -> Self {
        UnitJson {
            x: u.x().to_string(),
            y: u.y().to_string(),
            den: u.den(),
            norm: u.norm_sign(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubfieldUnits {
    pub p1: UnitJson,
    pub p2: UnitJson,
    #[serde(rename = "2")]
    pub two: UnitJson,
    #[serde(rename = "2p1")]
    pub two_p1: UnitJson,
    #[serde(rename = "2p2")]
    pub two_p2: UnitJson,
    pub p1p2: UnitJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmsJson {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelJson {
    pub size: u64,
    pub generators: Vec<String>,
    pub canonical: Vec<String>,
}

impl From<&KernelReport> for KernelJson {
    fn from(k: &KernelReport) -> Self {
        KernelJson {
            size: k.size,
            generators: words(&k.generators),
            canonical: words(&k.canonical),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelsJson {
    #[serde(rename = "K1")]
    pub k1: KernelJson,
    #[serde(rename = "K2")]
    pub k2: KernelJson,
    #[serde(rename = "K3")]
    pub k3: KernelJson,
    pub genus: KernelJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchesJson {
    #[serde(rename = "K1")]
    pub k1: &'static str,
    #[serde(rename = "K2")]
    pub k2: &'static str,
    #[serde(rename = "K3")]
    pub k3: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub p1: String,
    pub p2: String,
    pub d: String,
    pub eps_d: UnitJson,
    pub units: SubfieldUnits,
    #[serde(rename = "Q_k")]
    pub q_k: u8,
    #[serde(rename = "q_K3")]
    pub q_k3: u8,
    pub rank: u8,
    pub am_size: u64,
    pub ams_size: u64,
    pub ams: AmsJson,
    pub kernels: KernelsJson,
    pub type_222: bool,
    pub main_theorem: &'static str,
    pub eps_d_text: String,
    pub ams_case: &'static str,
    pub sqrt_form: Option<&'static str>,
    pub branches: BranchesJson,
    pub h1h2_principal: bool,
    pub h3h4_principal: bool,
    pub genus_equals_ams: bool,
    pub primality: &'static str,
    pub violations: Vec<String>,
}

pub fn words(ws: &[ClassWord]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

/// Runs the whole pipeline for one pair and re-checks it.
pub fn build_report(pair: &PrimePair, settings: &Settings) -> Result<FieldReport, Error> {
    let data = FieldData::with_period_cap(pair, settings.period_cap)?;
    let ks = kernels(&data)?;
    build_from(&data, &ks, settings)
}

fn build_from(data: &FieldData, ks: &Kernels, settings: &Settings) -> Result<FieldReport, Error> {
    let counts = ambiguous_counts(data)?;
    let verification = verify_kernels(data, ks)?;
    let k1 = classify_k1(data)?;
    let k2 = classify_k2(data)?;
    let k3 = classify_k3(data)?;
    let q_k3 = k3.unit_index.expect("K3 reports its unit index");
    let numeric = k3_unit_index_numeric(data, settings.precision_bits)?;
    if numeric != q_k3 {
        return Err(Error::Inconsistent(format!(
            "q(K3+) is {q_k3} from unit norms but {numeric} from the numeric square test"
        )));
    }
    let type_222 = is_type_222(data.pair());
    let (ams_case, sqrt_form) = match ks.ams.case {
        AmsCase::NegativeNorm(f) => ("negative_norm", Some(f.name())),
        AmsCase::PositiveNorm => ("positive_norm", None),
        AmsCase::UnitIndexTwo => ("unit_index_two", None),
    };
    let q_k = if ks.ams.case == AmsCase::UnitIndexTwo { 2 } else { 1 };
    let unit = |u: &QuadUnit| UnitJson::from(u);
    Ok(FieldReport {
        p1: data.pair().p1().to_string(),
        p2: data.pair().p2().to_string(),
        d: data.d().to_string(),
        eps_d: unit(data.eps_d()),
        units: SubfieldUnits {
            p1: unit(data.eps_p1()),
            p2: unit(data.eps_p2()),
            two: unit(data.eps_2()),
            two_p1: unit(data.eps_2p1()),
            two_p2: unit(data.eps_2p2()),
            p1p2: unit(data.eps_p1p2()),
        },
        q_k,
        q_k3,
        rank: counts.rank_r,
        am_size: counts.am_size,
        ams_size: counts.ams_size,
        ams: AmsJson {
            generators: words(&ks.ams.group.generators),
            relations: words(&ks.ams.group.relations),
        },
        kernels: KernelsJson {
            k1: (&ks.k1).into(),
            k2: (&ks.k2).into(),
            k3: (&ks.k3).into(),
            genus: (&ks.genus).into(),
        },
        type_222,
        main_theorem: verification.verdict(),
        eps_d_text: data.eps_d().to_string(),
        ams_case,
        sqrt_form,
        branches: BranchesJson {
            k1: k1.branch.label(),
            k2: k2.branch.label(),
            k3: k3.branch.label(),
        },
        h1h2_principal: pair_product_principal(Slot::P1, data)?,
        h3h4_principal: pair_product_principal(Slot::P2, data)?,
        genus_equals_ams: type_222,
        primality: match data.pair().certainty() {
            Primality::ProbablePrime => "probable",
            _ => "proven",
        },
        violations: verification
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect(),
    })
}

impl FieldReport {
    pub fn passed(&self) -> bool {
        self.main_theorem == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let norm = |n: i8| if n < 0 { "-1" } else { "+1" };
        let _ = writeln!(s, "pair        ({}, {})", self.p1, self.p2);
        let _ = writeln!(s, "d           {}", self.d);
        let _ = writeln!(s, "eps_d       {}  N = {}", self.eps_d_text, norm(self.eps_d.norm));
        let u = &self.units;
        for (label, unit) in [
            ("p1", &u.p1),
            ("p2", &u.p2),
            ("2", &u.two),
            ("2p1", &u.two_p1),
            ("2p2", &u.two_p2),
            ("p1p2", &u.p1p2),
        ] {
            let _ = writeln!(
                s,
                "eps_{label:<7} x = {}, y = {}, den = {}, N = {}",
                unit.x,
                unit.y,
                unit.den,
                norm(unit.norm)
            );
        }
        let _ = writeln!(s, "Q_k         {}", self.q_k);
        let _ = writeln!(s, "q_K3        {}", self.q_k3);
        let _ = writeln!(s, "rank        {}", self.rank);
        let _ = writeln!(s, "|Am|        {}", self.am_size);
        let _ = writeln!(s, "|Am_s|      {}", self.ams_size);
        let _ = writeln!(
            s,
            "Am_s        <{}> mod <{}>",
            self.ams.generators.join(", "),
            self.ams.relations.join(", ")
        );
        if let Some(form) = self.sqrt_form {
            let _ = writeln!(s, "pairing     {form}");
        }
        let b = &self.branches;
        for (name, k, branch) in [
            ("K1", &self.kernels.k1, Some(b.k1)),
            ("K2", &self.kernels.k2, Some(b.k2)),
            ("K3", &self.kernels.k3, Some(b.k3)),
            ("genus", &self.kernels.genus, None),
        ] {
            let case = branch.map(|c| format!("  case {c}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "ker {name:<7} size {}  <{}>{case}",
                k.size,
                k.generators.join(", ")
            );
        }
        let _ = writeln!(s, "type_222    {}", self.type_222);
        let _ = writeln!(s, "main        {}", self.main_theorem);
        for v in &self.violations {
            let _ = writeln!(s, "  violation {v}");
        }
        s
    }

    pub fn csv_row(&self) -> CsvRow {
        let join = |k: &KernelJson| k.generators.join("+");
        CsvRow {
            p1: self.p1.clone(),
            p2: self.p2.clone(),
            d: self.d.clone(),
            eps_x: self.eps_d.x.clone(),
            eps_y: self.eps_d.y.clone(),
            eps_den: self.eps_d.den,
            eps_norm: self.eps_d.norm,
            q_k: self.q_k,
            q_k3: self.q_k3,
            rank: self.rank,
            am_size: self.am_size,
            ams_size: self.ams_size,
            ams_generators: self.ams.generators.join("+"),
            k1_size: self.kernels.k1.size,
            k1_generators: join(&self.kernels.k1),
            k2_size: self.kernels.k2.size,
            k2_generators: join(&self.kernels.k2),
            k3_size: self.kernels.k3.size,
            k3_generators: join(&self.kernels.k3),
            genus_size: self.kernels.genus.size,
            genus_generators: join(&self.kernels.genus),
            type_222: self.type_222,
            main_theorem: self.main_theorem,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CsvRow {
    pub p1: String,
    pub p2: String,
    pub d: String,
    pub eps_x: String,
    pub eps_y: String,
    pub eps_den: u8,
    pub eps_norm: i8,
    #[serde(rename = "Q_k")]
    pub q_k: u8,
    #[serde(rename = "q_K3")]
    pub q_k3: u8,
    pub rank: u8,
    pub am_size: u64,
    pub ams_size: u64,
    pub ams_generators: String,
    #[serde(rename = "K1_size")]
    pub k1_size: u64,
    #[serde(rename = "K1_generators")]
    pub k1_generators: String,
    #[serde(rename = "K2_size")]
    pub k2_size: u64,
    #[serde(rename = "K2_generators")]
    pub k2_generators: String,
    #[serde(rename = "K3_size")]
    pub k3_size: u64,
    #[serde(rename = "K3_generators")]
    pub k3_generators: String,
    pub genus_size: u64,
    pub genus_generators: String,
    pub type_222: bool,
    pub main_theorem: &'static str,
}
