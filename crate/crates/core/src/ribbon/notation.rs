//! Text notation `(1+,6+,2-,4+,3+,5-)` and the JSON object form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Ribbon, Sign};
use crate::error::{Error, Result};

impl fmt::Display for Ribbon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..self.n() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}{}", self.value(i), self.mark(i).symbol())?;
        }
        f.write_str(")")
    }
}

impl FromStr for Ribbon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ribbon> {
        let (values, marks) = parse_entries(s)?;
        Ribbon::from_signs(&values, &marks)
    }
}

fn parse_err(pos: usize, msg: &str) -> Error {
    Error::Parse { pos, msg: msg.to_string() }
}

fn parse_entries(s: &str) -> Result<(Vec<u32>, Vec<Sign>)> {
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut it = chars.iter().peekable();
    match it.next() {
        Some((_, '(')) => {}
        Some(&(pos, _)) => return Err(parse_err(pos, "expected '('")),
        None => return Err(parse_err(0, "empty input")),
    }
    let mut values = Vec::new();
    let mut marks = Vec::new();
    loop {
        let mut digits = String::new();
        let mut start = s.len();
        while let Some(&&(pos, c)) = it.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            if digits.is_empty() {
                start = pos;
            }
            digits.push(c);
            it.next();
        }
        if digits.is_empty() {
            let pos = it.peek().map_or(s.len(), |p| p.0);
            return Err(parse_err(pos, "expected a node value"));
        }
        let v: u32 = digits.parse().map_err(|_| parse_err(start, "value out of range"))?;
        let sign = match it.next() {
            Some((_, '+')) => Sign::Plus,
            Some((_, '-')) | Some((_, '−')) => Sign::Minus,
            Some(&(pos, _)) => return Err(parse_err(pos, "expected '+' or '-'")),
            None => return Err(parse_err(s.len(), "unexpected end of input")),
        };
        values.push(v);
        marks.push(sign);
        match it.next() {
            Some((_, ',')) => continue,
            Some((_, ')')) => break,
            Some(&(pos, _)) => return Err(parse_err(pos, "expected ',' or ')'")),
            None => return Err(parse_err(s.len(), "unexpected end of input")),
        }
    }
    if let Some(&(pos, _)) = it.next() {
        return Err(parse_err(pos, "trailing characters"));
    }
    Ok((values, marks))
}

/// The JSON object form `{"values":[...],"marks":[1,-1,...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonJson {
    pub values: Vec<u32>,
    pub marks: Vec<i64>,
}

impl From<&Ribbon> for RibbonJson {
    fn from(r: &Ribbon) -> Self {
        RibbonJson {
            values: r.values().iter().map(|&v| v as u32).collect(),
            marks: r.marks().iter().map(|m| m.as_i8() as i64).collect(),
        }
    }
}

impl TryFrom<RibbonJson> for Ribbon {
    type Error = Error;

    fn try_from(j: RibbonJson) -> Result<Ribbon> {
        Ribbon::new(&j.values, &j.marks)
    }
}

impl Serialize for Ribbon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RibbonJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ribbon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Ribbon, D::Error> {
        let j = RibbonJson::deserialize(deserializer)?;
        Ribbon::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        let s = "(1+,6+,2-,4+,3+,5-)";
        let r: Ribbon = s.parse().unwrap();
        assert_eq!(r.to_string(), s);
        let spaced: Ribbon = " ( 1+ , 6+,2 -,4+,3+,5- ) ".parse().unwrap();
        assert_eq!(spaced, r);
    }

    #[test]
    fn round_trip_json() {
        let r: Ribbon = "(1+,3-,2+,4+)".parse().unwrap();
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, r#"{"values":[1,3,2,4],"marks":[1,-1,1,1]}"#);
        let back: Ribbon = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("1+,2+)".parse::<Ribbon>(), Err(Error::Parse { .. })));
        assert!(matches!("(1+,2)".parse::<Ribbon>(), Err(Error::Parse { .. })));
        assert!(matches!("(1+,2+".parse::<Ribbon>(), Err(Error::Parse { .. })));
        assert!(matches!("(1+,2+)x".parse::<Ribbon>(), Err(Error::Parse { .. })));
        assert_eq!("(1+,2+,3+,4+)".parse::<Ribbon>().unwrap_err(), Error::NotZigZag(1));
    }
}
