//! Algebraic models of the surfaces in each family, as equation templates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{is_prime, least_fourth_root};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveFamily {
    #[serde(rename = "C_g")]
    Cg,
    X4,
    X3,
    X2k,
    #[serde(rename = "K_g")]
    Kg,
    X8,
}

impl CurveFamily {
    pub const ALL: [CurveFamily; 6] =
        [CurveFamily::Cg, CurveFamily::X4, CurveFamily::X3, CurveFamily::X2k, CurveFamily::Kg, CurveFamily::X8];

    pub fn tag(self) -> &'static str {
        match self {
            CurveFamily::Cg => "C_g",
            CurveFamily::X4 => "X4",
            CurveFamily::X3 => "X3",
            CurveFamily::X2k => "X2k",
            CurveFamily::Kg => "K_g",
            CurveFamily::X8 => "X8",
        }
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CurveFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<CurveFamily> {
        let norm: String = s.chars().filter(|c| !matches!(c, '_' | ',' | ' ')).collect::<String>().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "cg" | "c" => CurveFamily::Cg,
            "x4" => CurveFamily::X4,
            "x3" => CurveFamily::X3,
            "x2k" | "x2" => CurveFamily::X2k,
            "kg" | "k" => CurveFamily::Kg,
            "x8" => CurveFamily::X8,
            _ => return invalid(format!("unknown curve family {s:?} (expected C_g, X4, X3, X2k, K_g or X8)")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    pub family: CurveFamily,
    pub q: u32,
    pub genus: u32,
    /// Only for X4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<u32>,
    /// (ρ² + 1)/q, only for X4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    /// Free symbols left in the equation, such as t or n_k.
    pub parameters: Vec<String>,
    pub equation: String,
    pub automorphisms: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn power(base: &str, exp: i64) -> String {
    match exp {
        0 => String::new(),
        1 => base.to_string(),
        e if e < 0 => format!("{base}^({e})"),
        e => format!("{base}^{e}"),
    }
}

pub fn curve_model(family: CurveFamily, q: u32) -> Result<CurveModel> {
    if q < 5 || !is_prime(q) {
        return invalid(format!("q = {q} must be a prime at least 5"));
    }
    let genus = q - 1;
    let mut model = CurveModel {
        family,
        q,
        genus,
        rho: None,
        e: None,
        parameters: Vec::new(),
        equation: String::new(),
        automorphisms: Vec::new(),
        notes: Vec::new(),
    };
    match family {
        CurveFamily::Cg => {
            model.parameters.push("t in C - {0,1}".into());
            model.equation = format!("y^2=(x^{q}-1)(x^{q}-t)");
            model.automorphisms = vec![format!("(x,y) -> (w_{q} x, -y)"), format!("(x,y) -> (t^(1/{q})/x, sqrt(t) y/x^{q})")];
        }
        CurveFamily::X4 => {
            if q % 4 != 1 {
                return invalid(format!("X4 exists only for q = 1 mod 4, got q = {q}"));
            }
            let rho = least_fourth_root(q).ok_or_else(|| Error::Invalid(format!("no fourth root of unity mod {q}")))?;
            let e = (rho * rho + 1) / q;
            model.rho = Some(rho);
            model.e = Some(e);
            model.equation = format!("y^{q}=(x-1)(x-i)^{rho}(x+1)^{}(x+i)^{}", q - 1, q - rho);
            let (e, r) = (e as i64, rho as i64);
            let phi: String = [power("(x+i)", e - r), power("(x-i)", 1 - e), power("(x+1)", 1 - r)].concat();
            let phi = if phi.is_empty() { "-1".to_string() } else { format!("-{phi}") };
            model.automorphisms = vec![format!("(x,y) -> (x, w_{q} y)"), format!("(x,y) -> (i x, phi(x) y^{rho})")];
            model.notes.push(format!("phi(x)={phi}"));
        }
        CurveFamily::X3 => {
            model.equation = format!("y^3=x^{q}-1");
            model.automorphisms = vec![format!("(x,y) -> (w_{q} x, w_3 y)")];
        }
        CurveFamily::X2k => {
            model.parameters.push(format!("n_k in {{1,...,{}}} - {{{}}}", q - 1, q - 2));
            model.parameters.push(format!("k in {{1,...,{}}}", (q - 3) / 2));
            model.equation = "y^q=x^(n_k)(x^2-1)".replace("y^q", &format!("y^{q}"));
            model.automorphisms = vec![format!("(x,y) -> (x, w_{q} y)"), "(x,y) -> (-x, (-1)^(n_k) y)".into()];
            model.notes.push("the map k -> n_k is not determined here; n_k is left as a free symbol".into());
        }
        CurveFamily::Kg => {
            model.parameters.push("t in C - {0,1,-1}".into());
            model.equation = format!("y^{q}=(x-1)(x+1)^{}(x-t)(x+t)^{}", q - 1, q - 1);
            model.automorphisms = vec![format!("(x,y) -> (x, w_{q} y)"), "(x,y) -> (-x, phi_t(x) y^(-1))".into()];
            model.notes.push("phi_t(x)=(x^2-1)(x^2-t^2)".into());
        }
        CurveFamily::X8 => {
            model.equation = format!("y^2=x^{}-1", 2 * q);
            model.automorphisms = vec![
                format!("(x,y) -> (w_{} x, y)", 2 * q),
                "(x,y) -> (x, -y)".into(),
                format!("(x,y) -> (1/x, i y/x^{q})"),
            ];
        }
    }
    Ok(model)
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family     {}", self.family)?;
        writeln!(f, "q          {}", self.q)?;
        writeln!(f, "genus      {}", self.genus)?;
        if let (Some(rho), Some(e)) = (self.rho, self.e) {
            writeln!(f, "rho        {rho}")?;
            writeln!(f, "e          {e}")?;
        }
        for p in &self.parameters {
            writeln!(f, "parameter  {p}")?;
        }
        writeln!(f, "equation   {}", self.equation)?;
        for a in &self.automorphisms {
            writeln!(f, "aut        {a}")?;
        }
        for n in &self.notes {
            writeln!(f, "note       {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x4_for_five() {
        let m = curve_model(CurveFamily::X4, 5).unwrap();
        assert_eq!(m.equation, "y^5=(x-1)(x-i)^2(x+1)^4(x+i)^3");
        assert_eq!(m.rho, Some(2));
        assert_eq!(m.e, Some(1));
        assert_eq!(m.notes, vec!["phi(x)=-(x+i)^(-1)(x+1)^(-1)".to_string()]);
        assert!(curve_model(CurveFamily::X4, 7).is_err());
    }

    #[test]
    fn templates() {
        assert_eq!(curve_model(CurveFamily::Cg, 7).unwrap().equation, "y^2=(x^7-1)(x^7-t)");
        assert_eq!(curve_model(CurveFamily::X3, 7).unwrap().equation, "y^3=x^7-1");
        assert_eq!(curve_model(CurveFamily::X2k, 11).unwrap().equation, "y^11=x^(n_k)(x^2-1)");
        assert_eq!(curve_model(CurveFamily::Kg, 5).unwrap().equation, "y^5=(x-1)(x+1)^4(x-t)(x+t)^4");
        assert_eq!(curve_model(CurveFamily::X8, 5).unwrap().equation, "y^2=x^10-1");
        assert_eq!(curve_model(CurveFamily::X4, 13).unwrap().rho, Some(5));
        assert!(curve_model(CurveFamily::X3, 9).is_err());
        assert_eq!("x_2,k".parse::<CurveFamily>().unwrap(), CurveFamily::X2k);
    }
}
