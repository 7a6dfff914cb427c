from sqlalchemy import Boolean, CheckConstraint, Column, DateTime, Float, ForeignKey, Integer, String, Text, func
from sqlalchemy.orm import relationship

from tubelab.db.base import Base


class SweepRun(Base):
    __tablename__ = "sweep_runs"
    id = Column(Integer, primary_key=True)
    theorem = Column(String(32), nullable=False, index=True)
    seed = Column(Integer, nullable=False)
    epsilon = Column(String(64), nullable=False)  # рациональное p/q
    fitted_constant = Column(Float, nullable=True)
    ratio_spread = Column(Float, nullable=True)
    drift = Column(Boolean, nullable=False, server_default="0")
    row_count = Column(Integer, nullable=False, server_default="0")
    skipped = Column(Text, nullable=False, server_default="")
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    rows = relationship("SweepRowRecord", back_populates="run", cascade="all, delete-orphan", order_by="SweepRowRecord.id")

    __table_args__ = (CheckConstraint("row_count >= 0", name="sweep_runs_row_count_nonnegative"),)


class SweepRowRecord(Base):
    __tablename__ = "sweep_rows"
    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("sweep_runs.id", ondelete="CASCADE"), nullable=False, index=True)
    delta = Column(String(64), nullable=False)
    W = Column(Integer, nullable=False)
    X = Column(Integer, nullable=False)
    r = Column(Integer, nullable=True)
    alpha = Column(String(64), nullable=True)
    measured = Column(Float, nullable=False)
    bound = Column(Float, nullable=False)
    ratio = Column(Float, nullable=False)
    note = Column(Text, nullable=False, server_default="")

    run = relationship("SweepRun", back_populates="rows")

    __table_args__ = (CheckConstraint("bound > 0", name="sweep_rows_bound_positive"),)
