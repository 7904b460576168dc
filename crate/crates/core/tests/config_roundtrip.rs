use kva_core::config::{load_config, parse_config, save_config};
use kva_core::{Error, MtmConvention, OptionKind, RunConfig};

#[test]
fn saved_config_loads_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut cfg = RunConfig::default();
    cfg.option.kind = OptionKind::Put;
    cfg.mtm = MtmConvention::RiskFree;
    cfg.cells = 320;
    cfg.degree = 2;
    cfg.market.sigma = 0.25;
    save_config(&cfg, &path).unwrap();
    assert_eq!(load_config(&path).unwrap(), cfg);
}

#[test]
fn partial_file_takes_defaults() {
    let cfg = parse_config(r#"{"option_kind": "put", "cells": 1280}"#).unwrap();
    assert_eq!(cfg.option.kind, OptionKind::Put);
    assert_eq!(cfg.cells, 1280);
    assert_eq!(cfg.market, RunConfig::default().market);
}

#[test]
fn unknown_keys_and_bad_values_are_rejected() {
    assert!(matches!(parse_config(r#"{"volatility": 0.3}"#), Err(Error::Parse(_))));
    assert!(matches!(parse_config(r#"{"sigma": -0.3}"#), Err(Error::InvalidParameter { .. })));
    assert!(matches!(parse_config(r#"{"cells": 7}"#), Err(Error::MisalignedStrike { .. })));
}

#[test]
fn readme_example_parses() {
    let cfg = parse_config(
        r#"{"option_kind": "put", "sigma": 0.3, "gamma_k": 0.15, "mtm": "risky", "cells": 1280, "degree": 2}"#,
    )
    .unwrap();
    assert_eq!(cfg.mtm, MtmConvention::Risky);
    assert_eq!(cfg.degree, 2);
    let clocks = parse_config(r#"{"maturity_clock": "residual", "put_delta_drift": "supervisory"}"#);
    assert!(clocks.is_ok());
}
