/** Session client: one user action, one protocol frame, in arrival order.
 *
 * The transport is injected so protocol tests run against a stub server.
 * Commands are refused while a snapshot is pending (the UI disables input
 * until the server's state arrives) and after disconnect; an accepted
 * action sends exactly one frame.
 */

import { ClientFrame, ServerFrame } from "./protocol";
import {
  ViewState,
  applyFrame,
  initialView,
  markBusy,
  markDisconnected,
} from "./state";

export interface Transport {
  send(data: string): void;
  close(): void;
}

export type ViewListener = (view: ViewState) => void;

export class SessionClient {
  private view: ViewState = initialView();
  private listeners: ViewListener[] = [];
  private origin = Date.now();
  private transport: Transport | null = null;

  attach(transport: Transport): void {
    this.transport = transport;
  }

  get state(): ViewState {
    return this.view;
  }

  get inputEnabled(): boolean {
    return this.view.connected && !this.view.busy && this.view.ended === null;
  }

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.view);
  }

  private now(): number {
    return Date.now() - this.origin;
  }

  private sendFrame(frame: ClientFrame): void {
    if (!this.transport) throw new Error("no transport attached");
    this.transport.send(JSON.stringify(frame));
  }

  /** Server messages apply strictly in arrival order. */
  handleMessage(raw: string): void {
    let frame: ServerFrame;
    try {
      frame = JSON.parse(raw) as ServerFrame;
    } catch {
      return; // not a protocol frame; ignore
    }
    this.view = applyFrame(this.view, frame);
    this.emit();
  }

  handleClose(): void {
    this.view = markDisconnected(this.view);
    this.emit();
  }

  requestLoad(): void {
    this.sendFrame({ type: "load" });
  }

  /** Returns true when the action was accepted and one frame was sent. */
  sendCommand(text: string): boolean {
    const trimmed = text.trim();
    if (!trimmed || !this.inputEnabled) return false;
    this.view = markBusy(this.view);
    this.sendFrame({ type: "command", text: trimmed, t: this.now() });
    this.emit();
    return true;
  }

  end(): boolean {
    if (!this.view.connected || this.view.ended !== null) return false;
    this.sendFrame({ type: "end" });
    return true;
  }
}
