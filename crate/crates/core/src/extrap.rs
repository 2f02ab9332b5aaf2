//! Extrapolation tasks.
