"""HTTP front door for the annotation workflow.

Authentication is a static bearer token per annotator, supplied in the
``X-Annotator-Token`` header and mapped to annotator ids by the service
config. Responses are plain JSON; endpoint names are frozen here and
documented in the README.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import Depends, FastAPI, Header, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .store import (
    AnnotationStore,
    AuthorizationError,
    DuplicateSubmissionError,
    StoreError,
)


class LabelBody(BaseModel):
    categories: list[str] = Field(min_length=1)
    lines: list[int] = Field(default_factory=list)


class CategoryBody(BaseModel):
    name: str


class ServiceConfig(BaseModel):
    tokens: dict[str, str]  # token -> annotator id

    @classmethod
    def load(cls, path: str | Path) -> "ServiceConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(**json.load(fh))


def create_app(
    store: AnnotationStore,
    config: ServiceConfig,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="snipdoc annotation service")

    def annotator(x_annotator_token: str | None = Header(default=None)) -> str:
        if x_annotator_token is None or x_annotator_token not in config.tokens:
            raise HTTPException(status_code=401, detail="invalid annotator token")
        return config.tokens[x_annotator_token]

    def task_view(task, viewer: str | None = None, all_labels: bool = False) -> dict:
        render = store.render.get(task.task_id, {})
        view = {
            "task_id": task.task_id,
            "method_id": task.method_id,
            "path": task.path,
            "comment_id": task.comment_id,
            "status": task.status,
            "assignees": list(task.assignees),
            "conflict_kind": task.conflict_kind,
            "linkable_lines": store.linkable.get(task.task_id, []),
            "body": render.get("body", []),
            "comment": render.get("comment"),
        }
        if all_labels:
            view["labels"] = {a: r.to_dict() for a, r in task.labels.items()}
            view["resolution"] = (
                task.resolution.to_dict() if task.resolution else None
            )
        elif viewer is not None and viewer in task.labels:
            view["labels"] = {viewer: task.labels[viewer].to_dict()}
        return view

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "tasks": len(store.tasks)}

    @app.get("/api/categories")
    def categories(user: str = Depends(annotator)) -> dict:
        return {"categories": store.valid_categories()}

    @app.post("/api/categories")
    def add_category(body: CategoryBody, user: str = Depends(annotator)) -> dict:
        try:
            name = store.add_extension_category(body.name)
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"name": name, "categories": store.valid_categories()}

    @app.get("/api/assignments")
    def assignments(user: str = Depends(annotator)) -> dict:
        pending = store.assignments(user)
        return {
            "annotator": user,
            "tasks": [task_view(t, viewer=user) for t in pending],
        }

    @app.get("/api/assignments/next")
    def next_assignment(user: str = Depends(annotator)) -> dict:
        pending = store.assignments(user)
        if not pending:
            return {"task": None}
        return {"task": task_view(pending[0], viewer=user)}

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str, user: str = Depends(annotator)) -> dict:
        task = store.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"no task {task_id}")
        # full labels appear once annotation settles; conflict details
        # stay hidden from the two assignees; mid-flight, users see only
        # their own stored label
        if task.status in {"labeled", "resolved"}:
            all_labels = True
        elif task.status == "conflicted":
            all_labels = user not in task.assignees
        else:
            all_labels = False
        return task_view(task, viewer=user, all_labels=all_labels)

    @app.post("/api/tasks/{task_id}/label")
    def submit_label(
        task_id: str, body: LabelBody, user: str = Depends(annotator)
    ) -> dict:
        try:
            status = store.submit_label(task_id, user, body.categories, body.lines)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no task {task_id}")
        except AuthorizationError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except DuplicateSubmissionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"task_id": task_id, "status": status}

    @app.get("/api/conflicts")
    def conflicts(user: str = Depends(annotator)) -> dict:
        open_conflicts = store.conflicts_for(user)
        return {
            "conflicts": [task_view(t, all_labels=True) for t in open_conflicts]
        }

    @app.post("/api/conflicts/{task_id}/resolve")
    def resolve(
        task_id: str, body: LabelBody, user: str = Depends(annotator)
    ) -> dict:
        try:
            status = store.resolve(task_id, user, body.categories, body.lines)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no task {task_id}")
        except AuthorizationError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except StoreError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"task_id": task_id, "status": status}

    @app.get("/api/export")
    def export(user: str = Depends(annotator)) -> dict:
        return store.export_gold()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
