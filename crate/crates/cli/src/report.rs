//! One-shot report: every verification, run in parallel and assembled in a
//! fixed order.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crepant::givental::Pair;
use crepant::lg::Chart;
use crepant::ModelId;

use crate::commands::{self, Output};
use crate::config::Settings;
use crate::CliError;

#[derive(Clone, Copy)]
enum Section {
    PicardFuchs,
    MirrorMaps,
    UMatrices,
    Continuation,
    Barnes,
    LandauGinzburg,
    FlatCoordinates,
    ThetaP1113,
    ThetaP112,
    Lefschetz,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::PicardFuchs => "picard_fuchs",
            Section::MirrorMaps => "mirror_maps",
            Section::UMatrices => "u_matrices",
            Section::Continuation => "continuation",
            Section::Barnes => "barnes",
            Section::LandauGinzburg => "landau_ginzburg",
            Section::FlatCoordinates => "flat_coordinates",
            Section::ThetaP1113 => "theta_p1113_f3",
            Section::ThetaP112 => "theta_p112_f2",
            Section::Lefschetz => "hard_lefschetz",
        }
    }

    fn run(self, s: &Settings) -> Result<Output, CliError> {
        let cache = crate::cache::Cache::new(None);
        let many = |items: Vec<Result<Output, CliError>>| -> Result<Output, CliError> {
            let items: Vec<Output> = items.into_iter().collect::<Result<_, _>>()?;
            let ok = items.iter().all(|i| i.1);
            Ok((Value::Array(items.into_iter().map(|i| i.0).collect()), ok))
        };
        match self {
            Section::PicardFuchs => many(ModelId::ALL.iter().map(|m| commands::pf(*m, s)).collect()),
            Section::MirrorMaps => many(
                [ModelId::F2, ModelId::F3].iter().map(|m| commands::mirror(*m, s, &cache)).collect(),
            ),
            Section::UMatrices => many([Pair::P1113F3, Pair::P112F2].iter().map(|p| commands::umatrix(*p)).collect()),
            Section::Continuation => {
                let s6 = Settings { order: s.order.min(6), ..s.clone() };
                commands::continued(Pair::P1113F3, &s6, 1e-20)
            }
            Section::Barnes => commands::barnes(s),
            Section::LandauGinzburg => many(vec![
                commands::lg(ModelId::P112, &[0.04], Chart::Large, s),
                commands::lg(ModelId::P1113, &[0.01], Chart::Large, s),
                commands::lg(ModelId::F2, &[0.01, 0.02], Chart::Large, s),
                commands::lg(ModelId::F3, &[0.01, 0.02], Chart::Large, s),
            ]),
            Section::FlatCoordinates => commands::flat_coordinates(12),
            Section::ThetaP1113 => many(
                [1e-2, 1e-1].iter().map(|q| commands::theta_cmd(Pair::P1113F3, *q, true, s)).collect(),
            ),
            Section::ThetaP112 => commands::theta_cmd(Pair::P112F2, 0.04, true, s),
            Section::Lefschetz => commands::lefschetz(),
        }
    }
}

pub fn build(s: &Settings, all: bool) -> Result<Output, CliError> {
    let mut sections = vec![
        Section::PicardFuchs,
        Section::MirrorMaps,
        Section::UMatrices,
        Section::Continuation,
        Section::LandauGinzburg,
        Section::FlatCoordinates,
        Section::ThetaP1113,
        Section::ThetaP112,
        Section::Lefschetz,
    ];
    if all {
        sections.insert(4, Section::Barnes);
    }
    let results: Vec<Result<Output, CliError>> = sections.par_iter().map(|sec| sec.run(s)).collect();
    let mut body = Map::new();
    let mut verdicts = Map::new();
    let mut ok = true;
    for (sec, r) in sections.iter().zip(results) {
        let (v, pass) = r?;
        ok &= pass;
        verdicts.insert(sec.name().into(), json!(pass));
        body.insert(sec.name().into(), v);
    }
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "order": s.order,
        "precision": s.precision,
        "verdicts": verdicts,
        "sections": body,
        "pass": ok,
    });
    Ok((doc, ok))
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
