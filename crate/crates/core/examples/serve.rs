//! Runs the HTTP API on 127.0.0.1:8080 (or the port given as the first argument).
//!
//!     cargo run --example serve -- 8080
//!     curl -s localhost:8080/api/health

use std::net::SocketAddr;

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let port: u16 = std::env::args().nth(1).and_then(|p| p.parse().ok()).unwrap_or(8080);
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    println!("listening on http://{addr}");
    dond::api::http::serve(addr, None).await
}
