//! Name-keyed registries of interchangeable strategies.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};

pub type Builder<T> = fn(&Value) -> Result<Box<T>>;

/// Maps strategy names to builders that take JSON parameters.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    builders: BTreeMap<String, Builder<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            builders: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, builder: Builder<T>) -> &mut Self {
        self.builders.insert(name.to_owned(), builder);
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.builders.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, params: &Value) -> Result<Box<T>> {
        let builder = self.builders.get(name).ok_or_else(|| Error::UnknownStrategy {
            kind: self.kind,
            name: name.to_owned(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        builder(params)
    }
}

/// Deserializes builder parameters, treating `null` as an empty object.
pub fn parse_params<P: serde::de::DeserializeOwned>(name: &'static str, params: &Value) -> Result<P> {
    let value = if params.is_null() {
        Value::Object(Default::default())
    } else {
        params.clone()
    };
    serde_json::from_value(value).map_err(|e| Error::param(name, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter {
        fn greet(&self) -> String;
    }

    struct Hello(String);

    impl Greeter for Hello {
        fn greet(&self) -> String {
            format!("hello {}", self.0)
        }
    }

    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct HelloParams {
        #[serde(default)]
        who: String,
    }

    fn build_hello(v: &Value) -> Result<Box<dyn Greeter>> {
        let p: HelloParams = parse_params("hello", v)?;
        Ok(Box::new(Hello(p.who)))
    }

    #[test]
    fn build_by_name() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register("hello", build_hello);
        let g = reg.build("hello", &serde_json::json!({"who": "disk"})).unwrap();
        assert_eq!(g.greet(), "hello disk");
        assert!(reg.build("hello", &Value::Null).is_ok());
        assert!(reg.build("hello", &serde_json::json!({"whom": 1})).is_err());
        match reg.build("bye", &Value::Null) {
            Err(Error::UnknownStrategy { known, .. }) => assert_eq!(known, "hello"),
            _ => panic!("expected unknown strategy"),
        }
    }
}
