//! A full game through the HTTP service, in process.
//!
//! `cargo run --example service`
//!
//! The same router is served on a socket by `babylon serve --addr 127.0.0.1:8080`.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use babylon::service::{router, AppState, EngineReply, GameView, LegalMoves};
use babylon::Solver;
use http_body_util::BodyExt;
use serde::de::DeserializeOwned;
use tower::ServiceExt;

async fn call<T: DeserializeOwned>(app: &axum::Router, method: &str, uri: &str, body: &str) -> (StatusCode, T) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .expect("valid request");
    let response = app.clone().oneshot(request).await.expect("infallible");
    let status = response.status();
    let bytes = response.into_body().collect().await.expect("body").to_bytes();
    (status, serde_json::from_slice(&bytes).expect("JSON reply"))
}

#[tokio::main]
async fn main() {
    let app = router(AppState::new(Arc::new(Solver::new())));
    let (status, game): (_, GameView) = call(&app, "POST", "/games", r#"{"p": 3, "q": 5}"#).await;
    println!("{status} created {} at {}", game.id, game.state.shape.as_deref().unwrap_or("?"));
    let id = game.id;
    loop {
        let (_, moves): (_, LegalMoves) = call(&app, "GET", &format!("/games/{id}/moves"), "").await;
        let Some(mv) = moves.moves.first() else { break };
        let (_, game): (_, GameView) = call(&app, "POST", &format!("/games/{id}/moves"), mv).await;
        println!("human  {mv:<9} -> {}", game.state.generic);
        if game.winner.is_some() {
            break;
        }
        let (_, reply): (_, EngineReply) = call(&app, "POST", &format!("/games/{id}/engine-move"), "").await;
        println!(
            "engine {:<9} -> {}  [{}] {}",
            reply.decision.mv.to_string(),
            reply.game.state.generic,
            reply.decision.rule_tag,
            reply.description
        );
        if reply.game.winner.is_some() {
            break;
        }
    }
    let (_, game): (_, GameView) = call(&app, "GET", &format!("/games/{id}"), "").await;
    println!("winner {:?} (predicted {:?})", game.winner, game.predicted_winner);
    let (_, audit): (_, serde_json::Value) = call(&app, "GET", &format!("/games/{id}/audit"), "").await;
    println!("audit {audit}");
    let (status, err): (_, serde_json::Value) = call(&app, "POST", "/games", r#"{"p": 0, "q": 5}"#).await;
    println!("{status} {err}");
}
