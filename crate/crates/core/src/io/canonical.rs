use serde::ser::{self, Serialize};

use crate::{Error, Result};

/// Rejects any NaN or infinite float reachable from `value`, naming its path.
pub fn ensure_finite<T: Serialize + ?Sized>(value: &T) -> Result<()> {
    let mut walker = FiniteCheck { path: Vec::new() };
    value
        .serialize(&mut walker)
        .map_err(|e| Error::NonFinite(if e.0.is_empty() { "$".into() } else { e.0 }))
}

/// Pretty JSON with sorted object keys, shortest round-trip floats and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    ensure_finite(value)?;
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Checks a CSV document: a header line, rectangular rows, `\n` line endings and
/// no non-finite numbers.
pub fn check_csv(name: &str, text: &str) -> Result<()> {
    if text.contains('\r') {
        return Err(Error::Config(format!("{name}: CSV must use \\n line endings")));
    }
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return Err(Error::Config(format!("{name}: CSV has no header")));
    };
    let width = header.split(',').count();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(Error::Config(format!(
                "{name} line {}: {} fields, header has {width}",
                i + 2,
                fields.len()
            )));
        }
        if let Some(f) = fields.iter().find(|f| {
            let f = f.trim().trim_start_matches(['+', '-']);
            f.eq_ignore_ascii_case("nan") || f.eq_ignore_ascii_case("inf") || f.eq_ignore_ascii_case("infinity")
        }) {
            return Err(Error::NonFinite(format!("{name} line {}: `{f}`", i + 2)));
        }
    }
    Ok(())
}

#[derive(Debug)]
struct PathError(String);

impl std::fmt::Display for PathError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for PathError {}

impl ser::Error for PathError {
    fn custom<T: std::fmt::Display>(msg: T) -> Self {
        PathError(msg.to_string())
    }
}

struct FiniteCheck {
    path: Vec<String>,
}

impl FiniteCheck {
    fn float(&self, v: f64) -> std::result::Result<(), PathError> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(PathError(format!("$.{} = {v}", self.path.join("."))))
        }
    }

    fn nested<T: Serialize + ?Sized>(&mut self, key: String, value: &T) -> std::result::Result<(), PathError> {
        self.path.push(key);
        value.serialize(&mut *self)?;
        self.path.pop();
        Ok(())
    }
}

struct Compound<'a> {
    walker: &'a mut FiniteCheck,
    index: usize,
    key: Option<String>,
}

type Res = std::result::Result<(), PathError>;

impl<'a> ser::Serializer for &'a mut FiniteCheck {
    type Ok = ();
    type Error = PathError;
    type SerializeSeq = Compound<'a>;
    type SerializeTuple = Compound<'a>;
    type SerializeTupleStruct = Compound<'a>;
    type SerializeTupleVariant = Compound<'a>;
    type SerializeMap = Compound<'a>;
    type SerializeStruct = Compound<'a>;
    type SerializeStructVariant = Compound<'a>;

    fn serialize_bool(self, _: bool) -> Res {
        Ok(())
    }
    fn serialize_i8(self, _: i8) -> Res {
        Ok(())
    }
    fn serialize_i16(self, _: i16) -> Res {
        Ok(())
    }
    fn serialize_i32(self, _: i32) -> Res {
        Ok(())
    }
    fn serialize_i64(self, _: i64) -> Res {
        Ok(())
    }
    fn serialize_u8(self, _: u8) -> Res {
        Ok(())
    }
    fn serialize_u16(self, _: u16) -> Res {
        Ok(())
    }
    fn serialize_u32(self, _: u32) -> Res {
        Ok(())
    }
    fn serialize_u64(self, _: u64) -> Res {
        Ok(())
    }
    fn serialize_f32(self, v: f32) -> Res {
        self.float(v as f64)
    }
    fn serialize_f64(self, v: f64) -> Res {
        self.float(v)
    }
    fn serialize_char(self, _: char) -> Res {
        Ok(())
    }
    fn serialize_str(self, _: &str) -> Res {
        Ok(())
    }
    fn serialize_bytes(self, _: &[u8]) -> Res {
        Ok(())
    }
    fn serialize_none(self) -> Res {
        Ok(())
    }
    fn serialize_some<T: Serialize + ?Sized>(self, value: &T) -> Res {
        value.serialize(self)
    }
    fn serialize_unit(self) -> Res {
        Ok(())
    }
    fn serialize_unit_struct(self, _: &'static str) -> Res {
        Ok(())
    }
    fn serialize_unit_variant(self, _: &'static str, _: u32, _: &'static str) -> Res {
        Ok(())
    }
    fn serialize_newtype_struct<T: Serialize + ?Sized>(self, _: &'static str, value: &T) -> Res {
        value.serialize(self)
    }
    fn serialize_newtype_variant<T: Serialize + ?Sized>(
        self,
        _: &'static str,
        _: u32,
        variant: &'static str,
        value: &T,
    ) -> Res {
        self.nested(variant.into(), value)
    }
    fn serialize_seq(self, _: Option<usize>) -> std::result::Result<Compound<'a>, PathError> {
        Ok(Compound {
            walker: self,
            index: 0,
            key: None,
        })
    }
    fn serialize_tuple(self, len: usize) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(Some(len))
    }
    fn serialize_tuple_struct(self, _: &'static str, len: usize) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(Some(len))
    }
    fn serialize_tuple_variant(
        self,
        _: &'static str,
        _: u32,
        _: &'static str,
        len: usize,
    ) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(Some(len))
    }
    fn serialize_map(self, len: Option<usize>) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(len)
    }
    fn serialize_struct(self, _: &'static str, len: usize) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(Some(len))
    }
    fn serialize_struct_variant(
        self,
        _: &'static str,
        _: u32,
        _: &'static str,
        len: usize,
    ) -> std::result::Result<Compound<'a>, PathError> {
        self.serialize_seq(Some(len))
    }
}

impl Compound<'_> {
    fn element<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        let key = format!("[{}]", self.index);
        self.index += 1;
        self.walker.nested(key, value)
    }
}

impl ser::SerializeSeq for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_element<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        self.element(value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeTuple for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_element<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        self.element(value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeTupleStruct for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        self.element(value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeTupleVariant for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        self.element(value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeMap for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_key<T: Serialize + ?Sized>(&mut self, key: &T) -> Res {
        key.serialize(&mut *self.walker)?;
        self.key = Some(match serde_json::to_value(key) {
            Ok(serde_json::Value::String(s)) => s,
            Ok(v) => v.to_string(),
            Err(_) => "?".into(),
        });
        Ok(())
    }
    fn serialize_value<T: Serialize + ?Sized>(&mut self, value: &T) -> Res {
        let key = self.key.take().unwrap_or_else(|| "?".into());
        self.walker.nested(key, value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeStruct for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, key: &'static str, value: &T) -> Res {
        self.walker.nested(key.into(), value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}

impl ser::SerializeStructVariant for Compound<'_> {
    type Ok = ();
    type Error = PathError;
    fn serialize_field<T: Serialize + ?Sized>(&mut self, key: &'static str, value: &T) -> Res {
        self.walker.nested(key.into(), value)
    }
    fn end(self) -> Res {
        Ok(())
    }
}
