void NavigationControllerImpl::GoBack() {
  if (!CanGoBack()) {
    NOTREACHED();
    return;
  }
  int current_index = GetCurrentEntryIndex();
  DiscardNonCommittedEntries();
  pending_entry_index_ = current_index - 1;
  NavigateToPendingEntry(ReloadType::NONE);
}
