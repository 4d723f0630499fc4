use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use serde_json::{json, Value};
use tower::ServiceExt;

use ribbonlab_core::ribbon::ladder_values;
use ribbonlab_core::{Ribbon, Solver};
use ribbonlab_service::{router, AppState};

fn app_with_timeout(idle: Duration) -> Arc<AppState> {
    Arc::new(AppState::new(Arc::new(Solver::new()), idle))
}

fn app() -> Arc<AppState> {
    app_with_timeout(Duration::from_secs(3600))
}

async fn call(app: &Arc<AppState>, path: &str, body: Value) -> (StatusCode, Value) {
    call_raw(app, path, body.to_string()).await
}

async fn call_raw(app: &Arc<AppState>, path: &str, body: String) -> (StatusCode, Value) {
    let req = Request::post(path).header("content-type", "application/json").body(Body::from(body)).unwrap();
    let resp = router(app.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn new_game(app: &Arc<AppState>, n: usize, seed: u64) -> Value {
    let (status, v) = call(app, "/game/new", json!({"n": n, "seed": seed})).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    v
}

async fn play(app: &Arc<AppState>, id: &str, node: usize) -> (StatusCode, Value) {
    call(app, &format!("/game/{id}/move"), json!({"node": node})).await
}

fn node_of(game: &Value, value: u32) -> usize {
    game["permutation"].as_array().unwrap().iter().position(|v| v.as_u64() == Some(value as u64)).unwrap()
}

fn free_nodes(state: &Value) -> Vec<usize> {
    state["marks"].as_array().unwrap().iter().enumerate().filter(|(_, m)| m.is_null()).map(|(i, _)| i).collect()
}

/// Seed whose board is the canonical ladder of size `n`.
async fn ladder_game(app: &Arc<AppState>, n: usize) -> Value {
    for seed in 0..2000 {
        let g = new_game(app, n, seed).await;
        let perm: Vec<u32> = g["permutation"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as u32).collect();
        if perm == ladder_values(n) {
            return g;
        }
    }
    panic!("no ladder board found for n={n}");
}

#[tokio::test]
async fn new_game_shape_and_determinism() {
    let app = app();
    let g = new_game(&app, 6, 42).await;
    let s = &g["state"];
    assert_eq!((s["pool_a"].as_u64(), s["pool_b"].as_u64()), (Some(2), Some(2)));
    assert_eq!(s["to_move"], "A");
    assert_eq!(s["status"]["status"], "in_progress");
    let marks = s["marks"].as_array().unwrap();
    assert_eq!(marks.iter().filter(|m| !m.is_null()).count(), 2);
    assert_eq!(marks[node_of(&g, 1)], 1);
    assert_eq!(marks[node_of(&g, 6)], 1);
    assert_eq!(new_game(&app, 6, 42).await["permutation"], g["permutation"]);
    assert_ne!(new_game(&app, 6, 42).await["id"], g["id"]);
}

#[tokio::test]
async fn bad_n_is_rejected() {
    let app = app();
    for n in [5, 2, 14] {
        let (status, v) = call(&app, "/game/new", json!({"n": n})).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        assert_eq!(v["error"], "BadN");
        assert!(v["message"].is_string());
    }
    let (status, v) = call_raw(&app, "/game/new", "{not json".into()).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("ParseOrValidation")));
}

#[tokio::test]
async fn move_errors() {
    let app = app();
    let g = new_game(&app, 6, 1).await;
    let id = g["id"].as_str().unwrap();
    let (status, v) = play(&app, "nope", 1).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::NOT_FOUND, Some("UnknownGame")));
    let (status, v) = play(&app, id, node_of(&g, 1)).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::CONFLICT, Some("NotYourTurnOrOccupied")));
    let free = free_nodes(&g["state"]);
    let (status, v) = call(&app, &format!("/game/{id}/move"), json!({"node": free[0], "player": "B"})).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::CONFLICT, Some("NotYourTurnOrOccupied")));
    let (status, v) = play(&app, id, free[0]).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["marks"][free[0]], -1);
    assert_eq!(v["to_move"], "B");
    let (status, _) = play(&app, id, free[0]).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = play(&app, id, 99).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "/game/nope/hint", json!({})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn mirror_strategy_wins_ladders() {
    let app = app();
    for n in [4usize, 6, 8] {
        let g = ladder_game(&app, n).await;
        let id = g["id"].as_str().unwrap().to_string();
        let mut state = g["state"].clone();
        while state["status"]["status"] == "in_progress" {
            let a = *free_nodes(&state).last().unwrap();
            let (_, s) = play(&app, &id, a).await;
            let partner = g["permutation"][a].as_u64().unwrap() as u32 ^ 1;
            let (status, s2) = play(&app, &id, node_of(&g, partner)).await;
            assert_eq!(status, StatusCode::OK, "{s}");
            state = s2;
        }
        assert_eq!(state["status"]["winner"], "B", "n={n}");
        assert_eq!(state["status"]["gamma"], 0);
    }
}

#[tokio::test]
async fn finished_games_follow_the_winner_rule() {
    let app = app();
    let solver = Solver::new();
    for seed in 0..12u64 {
        let g = new_game(&app, 8, seed).await;
        let id = g["id"].as_str().unwrap();
        let mut state = g["state"].clone();
        let mut turn = 0usize;
        while state["status"]["status"] == "in_progress" {
            let free = free_nodes(&state);
            let (_, s) = play(&app, id, free[(seed as usize + turn) % free.len()]).await;
            state = s;
            turn += 1;
        }
        let perm: Vec<u32> = g["permutation"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as u32).collect();
        let marks: Vec<i64> = state["marks"].as_array().unwrap().iter().map(|m| m.as_i64().unwrap()).collect();
        let a = Ribbon::new(&perm, &marks).unwrap();
        assert_eq!(a.signature(), 2);
        let gamma = solver.gamma(&a).unwrap();
        assert_eq!(state["status"]["gamma"], gamma);
        assert_eq!(state["status"]["winner"], if gamma == 0 { "B" } else { "A" });
    }
}

#[tokio::test]
async fn hints() {
    let app = app();
    let g = ladder_game(&app, 6).await;
    let seed = g["seed"].as_u64().unwrap();
    for a in free_nodes(&g["state"]) {
        let fresh = new_game(&app, 6, seed).await;
        let id = fresh["id"].as_str().unwrap();
        play(&app, id, a).await;
        let (status, h) = call(&app, &format!("/game/{id}/hint"), json!({})).await;
        assert_eq!(status, StatusCode::OK);
        let hints = h["hints"].as_array().unwrap();
        assert!(hints.iter().all(|x| x["mode"] == "exact"));
        assert!(hints.iter().any(|x| x["verdict"] == "b_wins"), "after A on {a}: {h}");
    }

    // One free node left: the hint must match the actual outcome.
    let g = new_game(&app, 6, 9).await;
    let id = g["id"].as_str().unwrap();
    let mut state = g["state"].clone();
    while free_nodes(&state).len() > 1 {
        let (_, s) = play(&app, id, free_nodes(&state)[0]).await;
        state = s;
    }
    let (_, h) = call(&app, &format!("/game/{id}/hint"), json!({})).await;
    let (_, last) = play(&app, id, free_nodes(&state)[0]).await;
    let expect = if last["status"]["winner"] == "B" { "b_wins" } else { "a_wins" };
    assert_eq!(h["hints"][0]["verdict"], expect);
    let (status, _) = call(&app, &format!("/game/{id}/hint"), json!({})).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let big = new_game(&app, 10, 3).await;
    let (_, h) = call(&app, &format!("/game/{}/hint", big["id"].as_str().unwrap()), json!({})).await;
    assert!(h["hints"].as_array().unwrap().iter().all(|x| x["mode"] == "heuristic"));
}

#[tokio::test]
async fn replaying_a_move_log_reproduces_the_state() {
    let app = app();
    let log = [3usize, 1, 4, 2, 5, 0, 6, 7, 8, 9];
    let mut finals = Vec::new();
    for _ in 0..2 {
        let g = new_game(&app, 8, 77).await;
        let id = g["id"].as_str().unwrap();
        let mut state = g["state"].clone();
        for &node in &log {
            let (status, s) = play(&app, id, node).await;
            if status == StatusCode::OK {
                state = s;
            }
        }
        state.as_object_mut().unwrap().remove("id");
        finals.push(state);
    }
    assert_eq!(finals[0], finals[1]);
}

#[tokio::test]
async fn invariants_endpoint() {
    let app = app();
    let (status, v) = call(&app, "/invariants", json!({"ribbon": "(1+,6+,2-,4+,3+,5-)"})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!((v["gamma"].as_u64(), v["gamma0"].as_u64(), v["gamma_sad"].as_u64()), (Some(2), Some(2), Some(1)));
    let (_, v) = call(&app, "/invariants", json!({"ribbon": "(1+,2+)"})).await;
    assert_eq!((v["gamma"].as_u64(), v["gamma0"].as_u64(), v["gamma_ext"].as_u64(), v["gamma_sad"].as_u64()), (Some(0), Some(0), Some(0), Some(0)));
    assert_eq!(v["sigma"], 2);
    let (_, v) = call(&app, "/invariants", json!({"ribbon": {"values": [1, 3, 2, 4], "marks": [-1, -1, -1, -1]}})).await;
    assert_eq!(v["gamma"], 3);
    let (status, v) = call(&app, "/invariants", json!({"ribbon": "(1+,2+,3+,4+)"})).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("ParseOrValidation")));
    let big: Vec<u32> = ladder_values(14);
    let (status, v) = call(&app, "/invariants", json!({"ribbon": {"values": big, "marks": vec![1; 14]}})).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("TooLarge")));
}

#[tokio::test]
async fn oracle_and_zero_endpoints() {
    let app = app();
    let (status, v) = call(&app, "/oracle", json!({"ribbon": "(1-,3-,2-,4-)", "emit_packings": true})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["minimum"]["gamma"], 3);
    assert_eq!(v["packings_list"].as_array().unwrap().len() as u64, v["packings"].as_u64().unwrap());
    let (status, v) = call(&app, "/oracle", json!({"ribbon": {"values": ladder_values(10), "marks": vec![1; 10]}})).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("TooLarge")));

    let (_, v) = call(&app, "/iszero", json!({"ribbon": "(1+,3-,2+,4+)"})).await;
    assert_eq!(v["zero"], true);
    assert!(!v["witness"].as_array().unwrap().is_empty());
    let (_, v) = call(&app, "/iszero", json!({"ribbon": "(1-,3-,2-,4-)"})).await;
    assert_eq!(v["zero"], false);
}

#[tokio::test]
async fn idle_games_expire_and_snapshots_restore() {
    let app = app_with_timeout(Duration::from_millis(1));
    let g = new_game(&app, 4, 1).await;
    tokio::time::sleep(Duration::from_millis(20)).await;
    let (status, _) = play(&app, g["id"].as_str().unwrap(), 1).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let keep = self::app();
    let g = new_game(&keep, 6, 5).await;
    let path = std::env::temp_dir().join(format!("ribbonlab-snapshot-{}.json", std::process::id()));
    keep.save_games(&path).unwrap();
    let restored = self::app();
    assert_eq!(restored.load_games(&path).unwrap(), 1);
    std::fs::remove_file(&path).unwrap();
    let free = free_nodes(&g["state"]);
    let (status, v) = play(&restored, g["id"].as_str().unwrap(), free[0]).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["to_move"], "B");
    let fresh = new_game(&restored, 4, 1).await;
    assert_ne!(fresh["id"], g["id"]);
}
