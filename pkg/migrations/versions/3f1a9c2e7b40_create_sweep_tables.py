"""create sweep tables

Revision ID: 3f1a9c2e7b40
Revises:
Create Date: 2026-10-17 12:00:00.000000

"""

from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = "3f1a9c2e7b40"
down_revision: Union[str, Sequence[str], None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    op.create_table(
        "sweep_runs",
        sa.Column("id", sa.Integer(), nullable=False),
        sa.Column("theorem", sa.String(32), nullable=False),
        sa.Column("seed", sa.Integer(), nullable=False),
        sa.Column("epsilon", sa.String(64), nullable=False),
        sa.Column("fitted_constant", sa.Float(), nullable=True),
        sa.Column("ratio_spread", sa.Float(), nullable=True),
        sa.Column("drift", sa.Boolean(), server_default="0", nullable=False),
        sa.Column("row_count", sa.Integer(), server_default="0", nullable=False),
        sa.Column("skipped", sa.Text(), server_default="", nullable=False),
        sa.Column("created_at", sa.DateTime(timezone=True), server_default=sa.func.now(), nullable=True),
        sa.PrimaryKeyConstraint("id"),
        sa.CheckConstraint("row_count >= 0", name="sweep_runs_row_count_nonnegative"),
    )
    op.create_index("ix_sweep_runs_theorem", "sweep_runs", ["theorem"])

    op.create_table(
        "sweep_rows",
        sa.Column("id", sa.Integer(), nullable=False),
        sa.Column("run_id", sa.Integer(), nullable=False),
        sa.Column("delta", sa.String(64), nullable=False),
        sa.Column("W", sa.Integer(), nullable=False),
        sa.Column("X", sa.Integer(), nullable=False),
        sa.Column("r", sa.Integer(), nullable=True),
        sa.Column("alpha", sa.String(64), nullable=True),
        sa.Column("measured", sa.Float(), nullable=False),
        sa.Column("bound", sa.Float(), nullable=False),
        sa.Column("ratio", sa.Float(), nullable=False),
        sa.Column("note", sa.Text(), server_default="", nullable=False),
        sa.PrimaryKeyConstraint("id"),
        sa.ForeignKeyConstraint(["run_id"], ["sweep_runs.id"], ondelete="CASCADE"),
        sa.CheckConstraint("bound > 0", name="sweep_rows_bound_positive"),
    )
    op.create_index("ix_sweep_rows_run_id", "sweep_rows", ["run_id"])


def downgrade() -> None:
    """Downgrade schema."""
    op.drop_index("ix_sweep_rows_run_id", table_name="sweep_rows")
    op.drop_table("sweep_rows")
    op.drop_index("ix_sweep_runs_theorem", table_name="sweep_runs")
    op.drop_table("sweep_runs")
