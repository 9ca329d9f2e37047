# src/io/artifact_writer.py
import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from src.models.errors import IoError
from src.utils.display_utils import format_number, json_ready


def config_hash(config: BaseModel) -> str:
    """
    配置的 sha256（键排序的紧凑 JSON），写入每个产物用于溯源。

    Args:
        config: 已校验的运行配置

    Returns:
        str: 十六进制摘要
    """
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ArtifactWriter:
    """
    把 CSV/JSON/文本产物原子地写入输出目录（临时文件 + 重命名）。

    输出不含时间戳，同一配置重复运行得到逐字节相同的文件。
    """

    def __init__(self, out_dir: str, config_digest: str, seed: Optional[int] = None, digits: int = 12):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.out_dir = out_dir
        self.config_digest = config_digest
        self.seed = seed
        self.digits = digits
        self.written: List[str] = []
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as e:
            raise IoError(f"无法创建输出目录 {out_dir}: {e}")

    def _atomic_write(self, name: str, text: str) -> str:
        path = os.path.join(self.out_dir, name)
        try:
            fd, tmp_path = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                    f.write(text)
                os.replace(tmp_path, path)
            except BaseException:
                if os.path.exists(tmp_path):
                    os.remove(tmp_path)
                raise
        except OSError as e:
            raise IoError(f"写入 {path} 失败: {e}")
        self.written.append(path)
        self.logger.info(f"已写入产物: {path}")
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        """第一行是 `# config_hash: ...`，然后表头与数据行"""
        buffer = io.StringIO()
        buffer.write(f"# config_hash: {self.config_digest}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else format_number(v, self.digits) for v in row])
        return self._atomic_write(name, buffer.getvalue())

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        """payload 前面加上 config_hash 与 seed，数值统一 12 位有效数字"""
        document = {"config_hash": self.config_digest, "seed": self.seed}
        document.update(payload)
        text = json.dumps(json_ready(document, self.digits), indent=2, ensure_ascii=False)
        return self._atomic_write(name, text + "\n")

    def write_text(self, name: str, text: str) -> str:
        return self._atomic_write(name, f"# config_hash: {self.config_digest}\n{text}\n")


__all__ = ["ArtifactWriter", "config_hash"]
