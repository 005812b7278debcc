//! Unit handling at the file boundary. Everything inside the library is in
//! bits, seconds and bits per second; a kilobyte is 1000 bytes.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DataUnit {
    #[default]
    #[serde(rename = "bits")]
    Bits,
    #[serde(rename = "bytes")]
    Bytes,
    #[serde(rename = "KB")]
    Kilobytes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TimeUnit {
    #[default]
    #[serde(rename = "s")]
    Seconds,
    #[serde(rename = "ms")]
    Milliseconds,
    #[serde(rename = "us", alias = "µs")]
    Microseconds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RateUnit {
    #[default]
    #[serde(rename = "bps")]
    BitsPerSecond,
    #[serde(rename = "kbps")]
    Kbps,
    #[serde(rename = "Mbps")]
    Mbps,
    #[serde(rename = "Gbps")]
    Gbps,
}

impl DataUnit {
    pub fn bits(self) -> f64 {
        match self {
            DataUnit::Bits => 1.0,
            DataUnit::Bytes => 8.0,
            DataUnit::Kilobytes => 8000.0,
        }
    }
}

impl TimeUnit {
    pub fn seconds(self) -> f64 {
        match self {
            TimeUnit::Seconds => 1.0,
            TimeUnit::Milliseconds => 1e-3,
            TimeUnit::Microseconds => 1e-6,
        }
    }
}

impl RateUnit {
    pub fn bps(self) -> f64 {
        match self {
            RateUnit::BitsPerSecond => 1.0,
            RateUnit::Kbps => 1e3,
            RateUnit::Mbps => 1e6,
            RateUnit::Gbps => 1e9,
        }
    }
}

impl fmt::Display for DataUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataUnit::Bits => "bits",
            DataUnit::Bytes => "bytes",
            DataUnit::Kilobytes => "KB",
        })
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeUnit::Seconds => "s",
            TimeUnit::Milliseconds => "ms",
            TimeUnit::Microseconds => "µs",
        })
    }
}

impl fmt::Display for RateUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateUnit::BitsPerSecond => "bps",
            RateUnit::Kbps => "kbps",
            RateUnit::Mbps => "Mbps",
            RateUnit::Gbps => "Gbps",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default)]
    pub data: DataUnit,
    #[serde(default)]
    pub time: TimeUnit,
    #[serde(default)]
    pub rate: RateUnit,
}

impl Units {
    pub fn to_bits(&self, v: f64) -> f64 {
        v * self.data.bits()
    }

    pub fn from_bits(&self, v: f64) -> f64 {
        v / self.data.bits()
    }

    pub fn to_seconds(&self, v: f64) -> f64 {
        v * self.time.seconds()
    }

    pub fn from_seconds(&self, v: f64) -> f64 {
        v / self.time.seconds()
    }

    pub fn to_bps(&self, v: f64) -> f64 {
        v * self.rate.bps()
    }

    pub fn from_bps(&self, v: f64) -> f64 {
        v / self.rate.bps()
    }
}
