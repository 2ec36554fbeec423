#
# FRISR: Super-resolved MRI from edge annihilation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

import duckdb

from frisr.recon import SweepResult


class ResultsStore:
    """DuckDB table of lambda-sweep rows, one row per (run, method, lambda)."""

    def __init__(self, db_path: str = "results.db", table_name: str = "sweeps"):
        self.conn = duckdb.connect(db_path)
        self.table_name = table_name
        self.init_table()

    def init_table(self):
        self.conn.execute(f"""CREATE TABLE IF NOT EXISTS {self.table_name} (run_tag VARCHAR, method VARCHAR, "lambda" DOUBLE, snr_db DOUBLE, objective DOUBLE, iters INTEGER)""")

    def add_sweep(self, run_tag: str, method: str, sweep: SweepResult):
        rows = [[run_tag, method, row.lam, row.snr_db, row.objective, row.iters] for row in sweep.rows]
        self.conn.executemany(f"""insert into {self.table_name} (run_tag, method, "lambda", snr_db, objective, iters) values (?, ?, ?, ?, ?, ?)""", rows)

    def get_num_rows(self, run_tag: str = None) -> int:
        if run_tag is None:
            result = self.conn.execute(f"SELECT COUNT(*) FROM {self.table_name}").fetchone()
        else:
            result = self.conn.execute(f"SELECT COUNT(*) FROM {self.table_name} WHERE run_tag = ?", [run_tag]).fetchone()
        return result[0] if result else 0

    def best_per_method(self, run_tag: str) -> list:
        """Returns (method, lambda, snr_db) of the best-SNR row per method, sorted by method."""
        return self.conn.execute(f"""
            SELECT method, arg_max("lambda", snr_db), max(snr_db)
            FROM {self.table_name}
            WHERE run_tag = ?
            GROUP BY method
            ORDER BY method
        """, [run_tag]).fetchall()

    def close(self):
        self.conn.close()
