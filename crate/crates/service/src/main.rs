use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use pf_service::{router, ServiceConfig};

#[derive(Parser)]
#[command(
    name = "pf-service",
    version,
    about = "HTTP API for perspective-consistency analysis"
)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "PF_BIND", default_value = "127.0.0.1")]
    bind: std::net::IpAddr,
    #[arg(long, env = "PF_PORT", default_value_t = 8080)]
    port: u16,
    /// Origin allowed to call the API from a browser, e.g. http://localhost:5173
    #[arg(long = "cors-origin", env = "PF_CORS_ORIGIN")]
    cors_origin: Option<String>,
    /// Directory of static files served outside /api.
    #[arg(long = "static-dir", env = "PF_STATIC_DIR")]
    static_dir: Option<PathBuf>,
    /// Image store budget in MiB; least recently used images are evicted.
    #[arg(
        long = "image-cache-mib",
        env = "PF_IMAGE_CACHE_MIB",
        default_value_t = 256
    )]
    image_cache_mib: usize,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let config = ServiceConfig {
        cors_origin: args.cors_origin,
        static_dir: args.static_dir,
        image_store_bytes: args.image_cache_mib.saturating_mul(1024 * 1024),
    };
    let app = match router(&config) {
        Ok(app) => app,
        Err(e) => {
            eprintln!("pf-service: {e}");
            return ExitCode::from(2);
        }
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("pf-service: cannot bind {addr}: {e}");
            return ExitCode::from(2);
        }
    };
    let local = listener.local_addr().unwrap_or(addr);
    eprintln!("pf-service {} listening on {local}", pf_core::TOOL_VERSION);
    if let Err(e) = axum::serve(listener, app).await {
        eprintln!("pf-service: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
