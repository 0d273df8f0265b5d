use polyball::arith::rational_string;
use polyball::{Family, Params};
use serde::Serialize;

/// One JSON result line.
#[derive(Debug, Serialize)]
pub struct Record {
    pub d: usize,
    pub k: String,
    pub family: Family,
    pub quantity: String,
    pub exact: String,
    pub decimal: String,
    pub method: String,
    pub erratum_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

impl Record {
    pub fn new(
        p: &Params,
        family: Family,
        quantity: &str,
        exact: String,
        decimal: String,
        method: &str,
    ) -> Self {
        Record {
            d: p.d(),
            k: rational_string(p.k()),
            family,
            quantity: quantity.to_string(),
            exact,
            decimal,
            method: method.to_string(),
            erratum_note: None,
            stderr: None,
            verified: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}
