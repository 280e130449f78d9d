"""HTTP/1.1 JSON API over the document store.

Routes (bearer-token auth except login):

    POST /api/login                      {username, password} -> {token, expires_at}
    GET  /api/files                      -> {files: [{id, name, revision, updated_at}]}
    POST /api/files                      {text} -> {id, revision, name}
    GET  /api/files/{id}                 -> {id, text, revision, name, updated_at}
    PUT  /api/files/{id}                 {text, expected_revision} -> {revision}
    POST /api/files/{id}/commands        {expected_revision, commands: [...]} -> {revision, text}
    POST /api/files/{id}/undo            {expected_revision?} -> {revision, text}
    POST /api/files/{id}/redo            {expected_revision?} -> {revision, text}
    GET  /api/files/{id}/draft           -> {text | null}
    PUT  /api/files/{id}/draft           {text} -> {}
    DELETE /api/files/{id}/draft         -> {}
    POST /api/files/{id}/validate        {text?} -> {diagnostics: [...]}
    GET  /api/files/{id}/views/{kind}    ?layer=&scope=&milestone= -> view JSON

Errors are JSON ``{code, message, diagnostics?}`` with a 4xx status:
401 AUTH_FAILED/AUTH_REQUIRED, 403 FORBIDDEN, 404 NOT_FOUND and
UNKNOWN_VIEW_SUBJECT, 409 REVISION_CONFLICT, 422 VALIDATION_FAILED and
CMD_* command errors.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

from fastapi import Depends, FastAPI, Header, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .commands import BatchError, CommandError
from .store import DocumentStore, ServiceError
from .views import UnknownViewSubject


class LoginBody(BaseModel):
    username: str
    password: str


class CreateBody(BaseModel):
    text: str


class PutBody(BaseModel):
    text: str
    expected_revision: int


class CommandsBody(BaseModel):
    expected_revision: int
    commands: list[dict]


class ReplayBody(BaseModel):
    expected_revision: Optional[int] = None


class DraftBody(BaseModel):
    text: str


class ValidateBody(BaseModel):
    text: Optional[str] = None


def create_app(store: DocumentStore, static_dir: Union[str, Path, None] = None) -> FastAPI:
    """The service app; static_dir, when given, serves the browser editor
    from / (the /api routes keep precedence)."""
    app = FastAPI(title="procplan service", docs_url=None, redoc_url=None)

    def bearer(authorization: Optional[str] = Header(default=None)) -> Optional[str]:
        if authorization and authorization.startswith("Bearer "):
            return authorization[len("Bearer "):]
        return None

    @app.exception_handler(ServiceError)
    async def service_error(_request: Request, exc: ServiceError):
        body = {"code": exc.code, "message": str(exc)}
        if exc.diagnostics:
            body["diagnostics"] = [d.to_json() for d in exc.diagnostics]
        return JSONResponse(status_code=exc.http_status, content=body)

    @app.exception_handler(CommandError)
    async def command_error(_request: Request, exc: CommandError):
        body = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, BatchError):
            body["index"] = exc.index
            body["cause"] = exc.cause.code
        return JSONResponse(status_code=422, content=body)

    @app.exception_handler(UnknownViewSubject)
    async def view_subject_error(_request: Request, exc: UnknownViewSubject):
        return JSONResponse(
            status_code=404, content={"code": exc.code, "message": str(exc)},
        )

    @app.post("/api/login")
    def login(body: LoginBody):
        session = store.login(body.username, body.password)
        return {"token": session.token, "expires_at": session.expiry}

    @app.get("/api/files")
    def list_files(token: Optional[str] = Depends(bearer)):
        return {"files": store.list_files(token)}

    @app.post("/api/files")
    def create_file(body: CreateBody, token: Optional[str] = Depends(bearer)):
        return store.create_document(token, body.text)

    @app.get("/api/files/{doc_id}")
    def get_file(doc_id: str, token: Optional[str] = Depends(bearer)):
        return store.get_document(token, doc_id)

    @app.put("/api/files/{doc_id}")
    def put_file(doc_id: str, body: PutBody, token: Optional[str] = Depends(bearer)):
        revision = store.put_document(token, doc_id, body.text, body.expected_revision)
        return {"revision": revision}

    @app.post("/api/files/{doc_id}/commands")
    def post_commands(doc_id: str, body: CommandsBody, token: Optional[str] = Depends(bearer)):
        revision, text = store.apply_commands(
            token, doc_id, body.expected_revision, body.commands,
        )
        return {"revision": revision, "text": text}

    @app.post("/api/files/{doc_id}/undo")
    def post_undo(doc_id: str, body: Optional[ReplayBody] = None,
                  token: Optional[str] = Depends(bearer)):
        expected = body.expected_revision if body else None
        revision, text = store.undo(token, doc_id, expected)
        return {"revision": revision, "text": text}

    @app.post("/api/files/{doc_id}/redo")
    def post_redo(doc_id: str, body: Optional[ReplayBody] = None,
                  token: Optional[str] = Depends(bearer)):
        expected = body.expected_revision if body else None
        revision, text = store.redo(token, doc_id, expected)
        return {"revision": revision, "text": text}

    @app.get("/api/files/{doc_id}/draft")
    def get_draft(doc_id: str, token: Optional[str] = Depends(bearer)):
        return {"text": store.get_draft(token, doc_id)}

    @app.put("/api/files/{doc_id}/draft")
    def put_draft(doc_id: str, body: DraftBody, token: Optional[str] = Depends(bearer)):
        store.save_draft(token, doc_id, body.text)
        return {}

    @app.delete("/api/files/{doc_id}/draft")
    def delete_draft(doc_id: str, token: Optional[str] = Depends(bearer)):
        store.delete_draft(token, doc_id)
        return {}

    @app.post("/api/files/{doc_id}/validate")
    def post_validate(doc_id: str, body: Optional[ValidateBody] = None,
                      token: Optional[str] = Depends(bearer)):
        text = body.text if body else None
        diagnostics = store.validate_document(token, doc_id, text)
        return {"diagnostics": [d.to_json() for d in diagnostics]}

    @app.get("/api/files/{doc_id}/views/{kind}")
    def get_view(doc_id: str, kind: str, request: Request,
                 token: Optional[str] = Depends(bearer)):
        params = dict(request.query_params)
        return store.get_view(token, doc_id, kind, params).to_json()

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="editor")

    return app
